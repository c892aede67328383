#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "arcknot/energy.hpp"

using namespace arcknot;

namespace {

constexpr double kPi = std::numbers::pi;

CurveSpec unit_circle() { return preset_curve("circle", {1.0}); }

const CurveSpec& ellipse() {
  static const CurveSpec c = arclength_reparametrize(preset_curve("ellipse", {2.0, 1.0}));
  return c;
}

BiarcCurve interpolant(const CurveSpec& c, int n, PartitionMode mode = PartitionMode::uniform(), std::uint64_t seed = 0) {
  return build_biarc_curve(c, make_partition(c.period, n, mode, seed));
}

double circle_closed_form(int n) { return 4 * kPi * kPi * (n - 1) / n; }

// Straight transcription of the definition: distance from q_i to the tangent
// line of junction j via orthogonal projection.
double oracle_energy(const BiarcCurve& b, double q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (i == j) continue;
      const Vec3 w = b.junctions[i].q - b.junctions[j].q;
      const Vec3 off = w - dot(w, b.junctions[j].t) * b.junctions[j].t;
      sum += std::pow(2 * norm(off) / dot(w, w), q) * b.lambdas[i] * b.lambdas[j];
    }
  }
  return sum;
}

}  // namespace

TEST(Discrete, CircleFourJunctions) {
  for (double q : {2.0, 3.0, 7.5}) {
    EXPECT_NEAR(discrete_tp_energy(interpolant(unit_circle(), 4), q, true, 2 * kPi).value(), 3 * kPi * kPi, 1e-12);
  }
}

TEST(Discrete, CircleSixtyFour) {
  const double e = discrete_tp_energy(interpolant(unit_circle(), 64), 3.0, true, 2 * kPi).value();
  EXPECT_NEAR(e, circle_closed_form(64), 1e-9 * e);
  EXPECT_NEAR(e, 38.8616, 1e-4);
}

TEST(Discrete, LogSpaceBranchOnCircle) {
  const double e = discrete_tp_energy(interpolant(unit_circle(), 32), 80.0, true, 2 * kPi).value();
  EXPECT_NEAR(e, circle_closed_form(32), 1e-9 * e);
}

TEST(Discrete, MatchesOracleOnJitteredEllipse) {
  const BiarcCurve b = interpolant(ellipse(), 40, PartitionMode::jitter(0.3), 5);
  for (double q : {2.0, 3.0, 6.0}) {
    const double oracle = oracle_energy(b, q);
    EXPECT_NEAR(discrete_tp_energy(b, q, false, ellipse().period).value(), oracle, 1e-11 * oracle);
  }
  // both branches agree where they overlap
  const double direct = discrete_tp_energy(b, 50.0, false, ellipse().period).value();
  EXPECT_NEAR(std::exp(log_discrete_tp_energy(b, 50.0)), direct, 1e-10 * direct);
}

TEST(Discrete, GateViolationIsInfinite) {
  const BiarcCurve b = scaled(interpolant(unit_circle(), 16), 4.0);
  EXPECT_TRUE(discrete_tp_energy(b, 3.0, true, 2 * kPi).is_infinite());
  EXPECT_TRUE(discrete_tp_energy(b, 3.0, false, 2 * kPi).is_finite());
}

TEST(Discrete, ScalingLaw) {
  const BiarcCurve b = interpolant(ellipse(), 24, PartitionMode::jitter(0.25), 9);
  const double q = 3.5;
  const double base = discrete_tp_energy(b, q, false, 0.0).value();
  for (double d : {0.5, 2.0, 7.0}) {
    const double e = discrete_tp_energy(scaled(b, d), q, false, 0.0).value();
    EXPECT_NEAR(e, std::pow(d, 2 - q) * base, 1e-9 * e);
  }
}

TEST(Discrete, SmallExponentThrows) {
  EXPECT_THROW(discrete_tp_energy(interpolant(unit_circle(), 8), 1.5, true, 2 * kPi), PreconditionError);
}

TEST(Continuous, UnitCircle) { EXPECT_NEAR(continuous_tp_energy(unit_circle(), 3.0, 512), 4 * kPi * kPi, 1e-6); }

TEST(Continuous, CircleScaling) {
  const double q = 3.0;
  for (double d : {0.5, 3.0}) {
    EXPECT_NEAR(continuous_tp_energy(preset_curve("circle", {d}), q, 256), std::pow(d, 2 - q) * 4 * kPi * kPi,
                1e-9);
  }
}

TEST(Continuous, EllipseGridStable) {
  const double v256 = continuous_tp_energy(ellipse(), 3.0, 256);
  const double v512 = continuous_tp_energy(ellipse(), 3.0, 512);
  EXPECT_NEAR(v256, v512, 1e-3 * v512);
}

TEST(Continuous, ParametrizationInvariant) {
  const double raw = continuous_tp_energy(preset_curve("ellipse", {2.0, 1.0}), 3.0, 512);
  const double arc = continuous_tp_energy(ellipse(), 3.0, 512);
  EXPECT_NEAR(raw, arc, 1e-8 * raw);
}

TEST(Continuous, StrictSequentialIsBitIdentical) {
  const CurveSpec c = preset_curve("torus_knot", {2, 3, 2, 0.5});
  EXPECT_EQ(continuous_tp_energy(c, 4.0, 256, Execution::Parallel),
            continuous_tp_energy(c, 4.0, 256, Execution::StrictSequential));
}

TEST(PowerMean, MonotoneAndBoundedByMax) {
  const CurveSpec& c = ellipse();
  const double top = max_inverse_tp_radius(c, 128);
  double previous = 0.0;
  for (double k : {2.0, 4.0, 8.0, 32.0, 128.0, 1024.0}) {
    const double m = tp_power_mean(c, k, 128);
    EXPECT_GE(m, previous * (1 - 1e-12));
    EXPECT_LE(m, top * (1 + 1e-12));
    previous = m;
  }
  EXPECT_NEAR(tp_power_mean(c, 1e5, 128), top, 1e-3 * top);
}

TEST(Thickness, UnitCircle) {
  const ThicknessResult t = thickness_and_ropelength(unit_circle());
  EXPECT_NEAR(t.thickness, 1.0, 1e-4);
  EXPECT_NEAR(t.ropelength, 2 * kPi, 1e-3);
}

TEST(Thickness, CircleRadiusThree) {
  const ThicknessResult t = thickness_and_ropelength(preset_curve("circle", {3.0}));
  EXPECT_NEAR(t.thickness, 3.0, 3e-4);
  EXPECT_NEAR(t.ropelength, 2 * kPi, 1e-3);
}

TEST(Thickness, EllipseLimitedByCurvature) {
  // min radius of curvature b^2 / a = 0.5 is below half the minor axis
  const ThicknessResult t = thickness_and_ropelength(preset_curve("ellipse", {2.0, 1.0}));
  EXPECT_NEAR(t.thickness, 0.5, 1e-6);
}

TEST(Thickness, TorusKnotStableUnderRefinement) {
  const CurveSpec c = preset_curve("torus_knot", {2, 3, 2, 0.5});
  const double d64 = thickness_and_ropelength(c, 64).thickness;
  const double d128 = thickness_and_ropelength(c, 128).thickness;
  EXPECT_GT(d64, 0.0);
  EXPECT_NEAR(d64, d128, 5e-3 * d128);
}

TEST(Proxy, CircleSixteen) {
  const double p = ropelength_proxy(interpolant(unit_circle(), 16), 2 * kPi).value();
  // L^{14/16} (4 pi^2 15/16)^{1/16} = 2 pi (15/16)^{1/16}
  EXPECT_NEAR(p, 2 * kPi * std::pow(15.0 / 16.0, 1.0 / 16.0), 1e-12);
}

TEST(Proxy, CircleApproachesTwoPiFromBelow) {
  double previous_gap = 1e300;
  for (int n : {16, 32, 64, 128}) {
    const double p = ropelength_proxy(interpolant(unit_circle(), n), 2 * kPi).value();
    EXPECT_LT(p, 2 * kPi);
    EXPECT_LT(2 * kPi - p, previous_gap);
    previous_gap = 2 * kPi - p;
  }
}

TEST(Proxy, OutsideGateIsInfinite) {
  EXPECT_TRUE(ropelength_proxy(scaled(interpolant(unit_circle(), 16), 4.0), 2 * kPi).is_infinite());
}

TEST(Proxy, CollapsedJunctionsThrow) {
  const std::vector<PointTangent> j(4, PointTangent({0, 0, 0}, {1, 0, 0}));
  EXPECT_ANY_THROW(ropelength_proxy(BiarcCurve::from_junctions(j), 1.0));
}

TEST(Holder, EqualExponentsAreTight) {
  const HolderCheck h = holder_bound_check(interpolant(unit_circle(), 16), 4.0, 4.0, 2 * kPi);
  EXPECT_TRUE(h.holds);
  EXPECT_NEAR(h.lhs, h.rhs, 1e-13 * h.rhs);
}

TEST(Holder, CircleSixteen) {
  const BiarcCurve b = interpolant(unit_circle(), 16);
  const HolderCheck h = holder_bound_check(b, 2.0, 8.0, 2 * kPi);
  EXPECT_TRUE(h.holds);
  // every ratio is 1: E_k = len^2 (n - 1) / n for all k
  const double e = circle_closed_form(16);
  EXPECT_NEAR(h.lhs, std::sqrt(e), 1e-12);
  EXPECT_NEAR(h.rhs, std::pow(4 * 4 * kPi * kPi * 15 / 16, 0.5 - 0.125) * std::pow(e, 0.125), 1e-12);
}

TEST(Holder, GateViolationThrows) {
  EXPECT_THROW(holder_bound_check(scaled(interpolant(unit_circle(), 16), 4.0), 2, 4, 2 * kPi), PreconditionError);
  EXPECT_THROW(holder_bound_check(interpolant(unit_circle(), 16), 4, 2, 2 * kPi), PreconditionError);
}

TEST(Report, RowFollowsColumns) {
  EnergyReport r;
  r.kind = "discrete";
  r.q = 3;
  r.n = 16;
  r.value = ExtendedReal::infinity();
  r.curve = "circle";
  const auto row = r.row();
  ASSERT_EQ(row.size(), EnergyReport::columns().size());
  EXPECT_EQ(format_cell(row[3]), "inf");
  EXPECT_EQ(EnergyReport::columns(),
            (std::vector<std::string>{"kind", "q", "n", "value", "grid", "curve", "seed"}));
  r.partition = "jitter:0.2";
  const std::string json = r.to_json();
  EXPECT_EQ(json.front(), '{');
  EXPECT_NE(json.find("\"partition\": \"jitter:0.2\""), std::string::npos) << json;
}

TEST(Proxy, LogSpaceMatchesDirectEvaluation) {
  for (int n : {8, 16, 20}) {
    const BiarcCurve b = interpolant(ellipse(), n, PartitionMode::jitter(0.15), 2);
    const double L = ellipse().period;
    const double direct = std::pow(L, (n - 2.0) / n) * std::pow(oracle_energy(b, n), 1.0 / n);
    EXPECT_NEAR(ropelength_proxy(b, L).value(), direct, 1e-10 * direct);
  }
}

TEST(Continuous, ShiftInvariant) {
  CurveSpec shifted = ellipse();
  const CurveSpec base = ellipse();
  const double offset = 0.37 * base.period;
  shifted.position = [base, offset](double s) { return base.position(s + offset); };
  shifted.derivative = [base, offset](double s) { return base.derivative(s + offset); };
  shifted.second_derivative = [base, offset](double s) { return (*base.second_derivative)(s + offset); };
  const double a = continuous_tp_energy(base, 4.0, 256), b = continuous_tp_energy(shifted, 4.0, 256);
  EXPECT_NEAR(a, b, 1e-8 * a);
}
