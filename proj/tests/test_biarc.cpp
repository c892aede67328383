#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "arcknot/biarc.hpp"

using namespace arcknot;

namespace {

constexpr double kPi = std::numbers::pi;
const double kR = std::sqrt(0.5);

PointTangent pt(Vec3 q, Vec3 t) { return PointTangent(q, t); }

const PointTangent kQ0 = pt({1, 0, 0}, {0, 1, 0});   // quarter unit circle start
const PointTangent kQ1 = pt({0, 1, 0}, {-1, 0, 0});  // and end

void expect_near(const Vec3& a, const Vec3& b, double tol) { EXPECT_LE(distance(a, b), tol) << a.x << ' ' << a.y << ' ' << a.z; }

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return normalized(Vec3{g(rng), g(rng), g(rng)});
}

// Random pair with both tangents at most ~80 degrees off the chord.
std::pair<PointTangent, PointTangent> random_proper_pair(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> len(0.01, 3.0);
  const Vec3 q0{u(rng), u(rng), u(rng)};
  const Vec3 e = random_unit(rng);
  const Vec3 q1 = q0 + len(rng) * e;
  Vec3 t0, t1;
  do t0 = random_unit(rng); while (dot(t0, e) < 0.2);
  do t1 = random_unit(rng); while (dot(t1, e) < 0.2);
  return {pt(q0, t0), pt(q1, t1)};
}

}  // namespace

TEST(Classify, EqualTangentsTransversal) {
  EXPECT_EQ(classify_pair(pt({0, 0, 0}, {1, 0, 0}), pt({1, 0, 0}, {1, 0, 0})), PairClass::EqualTangentsTransversal);
}

TEST(Classify, EqualTangentsPerpendicular) {
  EXPECT_EQ(classify_pair(pt({0, 0, 0}, {0, 1, 0}), pt({1, 0, 0}, {0, 1, 0})), PairClass::EqualTangentsPerpendicular);
}

TEST(Classify, QuarterCircleIsCompatible) { EXPECT_EQ(classify_pair(kQ0, kQ1), PairClass::CocircularCompatible); }

TEST(Classify, OpposedTangentsAreIncompatible) {
  // t1* = R(e) t1 = (-1, 0, 0) = -t0
  EXPECT_EQ(classify_pair(pt({0, 0, 0}, {1, 0, 0}), pt({1, 0, 0}, {-1, 0, 0})), PairClass::CocircularIncompatible);
}

TEST(Classify, Generic) {
  EXPECT_EQ(classify_pair(pt({0, 0, 0}, {1, 0, 0}), pt({1, 0.2, 0.1}, normalized(Vec3{1, 0.1, -0.2}))),
            PairClass::Generic);
  EXPECT_EQ(to_string(PairClass::Generic), "Generic");
}

TEST(MatchingPoint, StraightPairGivesMidpoint) {
  expect_near(balanced_matching_point(pt({0, 0, 0}, {1, 0, 0}), pt({1, 0, 0}, {1, 0, 0})), {0.5, 0, 0}, 1e-15);
}

TEST(MatchingPoint, QuarterCircle) { expect_near(balanced_matching_point(kQ0, kQ1), {kR, kR, 0}, 1e-15); }

TEST(MatchingPoint, ImproperPairThrows) {
  EXPECT_THROW(balanced_matching_point(pt({0, 0, 0}, {-1, 0, 0}), pt({1, 0, 0}, {1, 0, 0})), PreconditionError);
  EXPECT_THROW(balanced_matching_point(pt({0, 0, 0}, {1, 0, 0}), pt({1, 0, 0}, {-1, 0, 0})), PreconditionError);
}

TEST(Build, StraightPair) {
  const Biarc b = build_balanced_biarc(pt({0, 0, 0}, {1, 0, 0}), pt({1, 0, 0}, {1, 0, 0}));
  EXPECT_NEAR(b.first.length, 0.5, 1e-15);
  EXPECT_NEAR(b.second.length, 0.5, 1e-15);
  EXPECT_NEAR(b.total_length, 1.0, 1e-15);
  EXPECT_EQ(b.first.curvature(), 0.0);
}

TEST(Build, QuarterCircleArcsLieOnCircle) {
  const Biarc b = build_balanced_biarc(kQ0, kQ1);
  EXPECT_NEAR(b.first.length, kPi / 4, 1e-14);
  EXPECT_NEAR(b.second.length, kPi / 4, 1e-14);
  EXPECT_NEAR(b.total_length, kPi / 2, 1e-14);
  for (int i = 0; i <= 20; ++i) EXPECT_NEAR(norm(eval_biarc(b, b.total_length * i / 20).first), 1.0, 1e-14);
}

TEST(Build, GenericNonPlanarPair) {
  const PointTangent a = pt({0, 0, 0}, {1, 0, 0});
  const PointTangent c = pt({1, 0.2, 0.1}, normalized(Vec3{1, 0.05, -0.03}));
  const Biarc b = build_balanced_biarc(a, c);
  expect_near(b.first.end_point(), b.matching_point, 1e-10);
  expect_near(b.second.p0, b.matching_point, 1e-10);
  expect_near(b.first.end_tangent(), b.second.u0, 1e-10);
  expect_near(b.second.end_point(), c.q, 1e-10);
  expect_near(b.second.end_tangent(), c.t, 1e-10);
  EXPECT_NEAR(distance(b.matching_point, a.q), distance(b.matching_point, c.q), 1e-10);
}

TEST(Eval, Endpoints) {
  const Biarc b = build_balanced_biarc(kQ0, kQ1);
  auto [p0, t0] = eval_biarc(b, 0.0);
  expect_near(p0, kQ0.q, 1e-15);
  expect_near(t0, kQ0.t, 1e-15);
  auto [pm, tm] = eval_biarc(b, b.first.length);
  expect_near(pm, b.matching_point, 1e-14);
  expect_near(tm, normalized(Vec3{-1, 1, 0}), 1e-14);
  auto [p1, t1] = eval_biarc(b, b.total_length);
  expect_near(p1, kQ1.q, 1e-14);
  expect_near(t1, kQ1.t, 1e-14);
}

TEST(Eval, QuarterCirclePoint) {
  const Biarc b = build_balanced_biarc(kQ0, kQ1);
  expect_near(eval_biarc(b, kPi / 4).first, {kR, kR, 0}, 1e-14);
  // s = pi/8 along the unit circle from (1, 0, 0)
  expect_near(eval_biarc(b, kPi / 8).first, {std::cos(kPi / 8), std::sin(kPi / 8), 0}, 1e-14);
}

TEST(Eval, OutOfRangeThrows) {
  const Biarc b = build_balanced_biarc(kQ0, kQ1);
  EXPECT_THROW(eval_biarc(b, -0.1), PreconditionError);
  EXPECT_THROW(eval_biarc(b, b.total_length + 0.1), PreconditionError);
}

TEST(Parameter, StraightPair) {
  const Biarc b = build_balanced_biarc(pt({0, 0, 0}, {1, 0, 0}), pt({1, 0, 0}, {1, 0, 0}));
  EXPECT_NEAR(biarc_parameter(b), 0.5, 1e-15);
}

TEST(Parameter, QuarterCircle) {
  // <t0,d> = 1, |m - q0|^2 = 2 - sqrt2, <t0, m - q0> = sqrt2 / 2, |d|^2 = 2
  EXPECT_NEAR(biarc_parameter(build_balanced_biarc(kQ0, kQ1)), std::sqrt(2.0) - 1.0, 1e-14);
}

TEST(ArcTest, ThroughBehindStartThrows) {
  EXPECT_THROW(Arc::through({0, 0, 0}, {1, 0, 0}, {-1, 0, 0}), NumericalError);
}

TEST(ArcTest, SampledPointsAreConcyclic) {
  const Arc a = Arc::through({0, 0, 0}, {1, 0, 0}, {1, 1, 0.5});
  const double r = 1.0 / a.curvature();
  const Vec3 centre = a.p0 + (r * r) * a.curvature_vector;
  for (int i = 0; i <= 10; ++i) EXPECT_NEAR(distance(a.position(a.length * i / 10), centre), r, 1e-12);
  expect_near(a.end_point(), {1, 1, 0.5}, 1e-13);
}

TEST(Invariants, RandomProperPairs) {
  std::mt19937_64 rng(20240611);
  int built = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto [a, c] = random_proper_pair(rng);
    ASSERT_TRUE(is_proper(a, c));
    if (classify_pair(a, c) == PairClass::CocircularIncompatible) continue;
    const Biarc b = build_balanced_biarc(a, c);
    const double scale = std::max(1.0, distance(a.q, c.q));
    expect_near(b.first.p0, a.q, 1e-10 * scale);
    expect_near(b.first.u0, a.t, 1e-10);
    expect_near(b.first.end_point(), b.second.p0, 1e-10 * scale);
    expect_near(b.first.end_tangent(), b.second.u0, 1e-10);
    expect_near(b.second.end_point(), c.q, 1e-10 * scale);
    expect_near(b.second.end_tangent(), c.t, 1e-10);
    EXPECT_NEAR(distance(b.matching_point, a.q), distance(b.matching_point, c.q), 1e-10 * scale);
    EXPECT_NEAR(b.total_length, b.first.length + b.second.length, 1e-12 * scale);
    ++built;
  }
  EXPECT_EQ(built, 1000);
}

TEST(Eval, UnitSpeed) {
  const Biarc b = build_balanced_biarc(pt({0, 0, 0}, {1, 0, 0}), pt({1, 0.2, 0.1}, normalized(Vec3{1, 0.05, -0.03})));
  const double ds = 1e-4 * b.total_length;
  for (int i = 0; i + 1 < 10000; i += 97) {
    const double s = ds * i;
    EXPECT_NEAR(distance(eval_biarc(b, s + ds).first, eval_biarc(b, s).first) / ds, 1.0, 1e-6);
  }
}
