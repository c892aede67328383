#include "arcknot/biarc.hpp"

#include <cmath>
#include <sstream>

#include "arcknot/geom.hpp"

namespace arcknot {

namespace {

constexpr double kClassTol = 1e-9;
constexpr double kJoinTol = 1e-8;

// sin(x)/x
double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

struct Chord {
  Vec3 d;
  double length;
  Vec3 e;
};

Chord chord_of(const PointTangent& a, const PointTangent& b) {
  const Vec3 d = b.q - a.q;
  const double len = norm(d);
  if (!(len > 0.0)) throw PreconditionError("point-tangent pair with coincident points");
  return {d, len, d / len};
}

}  // namespace

PointTangent::PointTangent(const Vec3& q_, const Vec3& t_) : q(q_), t(t_) {
  geom::require_unit(t, 1e-9, "point-tangent direction");
}

std::string_view to_string(PairClass c) {
  switch (c) {
    case PairClass::Generic: return "Generic";
    case PairClass::CocircularCompatible: return "CocircularCompatible";
    case PairClass::CocircularIncompatible: return "CocircularIncompatible";
    case PairClass::EqualTangentsTransversal: return "EqualTangentsTransversal";
    case PairClass::EqualTangentsPerpendicular: return "EqualTangentsPerpendicular";
  }
  return "?";
}

Arc Arc::through(const Vec3& start, const Vec3& tangent, const Vec3& end) {
  const Vec3 w = end - start;
  const double wl = norm(w);
  if (!(wl > 0.0)) throw NumericalError("arc through coincident points");
  const double along = dot(w, tangent);
  const Vec3 normal_part = w - along * tangent;
  const double across = norm(normal_part);
  // Half the turning angle of the arc.
  const double half_turn = std::atan2(across, along);
  if (half_turn > M_PI - 1e-9) throw NumericalError("arc end point lies behind its start tangent");
  Arc arc;
  arc.p0 = start;
  arc.u0 = tangent;
  arc.curvature_vector = (2.0 / (wl * wl)) * normal_part;
  arc.length = wl / sinc(half_turn);
  return arc;
}

Vec3 Arc::position(double s) const {
  const double x = curvature() * s;
  const double h = sinc(0.5 * x);
  return p0 + (s * sinc(x)) * u0 + (0.5 * s * s * h * h) * curvature_vector;
}

Vec3 Arc::tangent(double s) const {
  const double x = curvature() * s;
  return std::cos(x) * u0 + (s * sinc(x)) * curvature_vector;
}

PairClass classify_pair(const PointTangent& a, const PointTangent& b) {
  const Chord c = chord_of(a, b);
  if (norm(a.t - b.t) <= kClassTol) {
    return std::abs(dot(a.t, c.e)) > kClassTol ? PairClass::EqualTangentsTransversal
                                                : PairClass::EqualTangentsPerpendicular;
  }
  const Vec3 t1_star = geom::reflect_about(c.e, b.t);
  if (norm(a.t - t1_star) <= kClassTol) return PairClass::CocircularCompatible;
  if (norm(a.t + t1_star) <= kClassTol) return PairClass::CocircularIncompatible;
  return PairClass::Generic;
}

bool is_proper(const PointTangent& a, const PointTangent& b) {
  const Vec3 d = b.q - a.q;
  return dot(d, a.t) > 0.0 && dot(d, b.t) > 0.0;
}

Vec3 balanced_matching_point(const PointTangent& a, const PointTangent& b) {
  const Chord c = chord_of(a, b);
  if (!is_proper(a, b)) throw PreconditionError("balanced biarc requires a proper point-tangent pair");
  if (classify_pair(a, b) == PairClass::CocircularIncompatible) {
    throw PreconditionError("balanced biarc undefined for an incompatible cocircular pair");
  }
  // The matching-point circle passes through q0 with tangent tau = t0 + t1*.
  // It is symmetric about the bisector plane of the chord, which it meets at
  // the midpoints of its two arcs; the one on the subarc oriented by tau sits
  // at sagitta (|d|/2) tan(alpha/2) from the chord midpoint, alpha being the
  // angle between tau and the chord. For a proper pair <tau, e> > 0, so
  // alpha < pi/2 and the straight case alpha = 0 is regular.
  const Vec3 tau = normalized(a.t + geom::reflect_about(c.e, b.t));
  const double cos_alpha = dot(tau, c.e);
  const Vec3 sin_alpha_n = tau - cos_alpha * c.e;
  const Vec3 midpoint = a.q + 0.5 * c.d;
  return midpoint + (0.5 * c.length / (1.0 + cos_alpha)) * sin_alpha_n;
}

Biarc build_balanced_biarc(const PointTangent& a, const PointTangent& b) {
  const Vec3 m = balanced_matching_point(a, b);
  Biarc out;
  out.matching_point = m;
  out.pair = {a, b};
  out.first = Arc::through(a.q, a.t, m);
  out.second = Arc::through(m, out.first.end_tangent(), b.q);
  out.total_length = out.first.length + out.second.length;

  const double mismatch = norm(out.second.end_tangent() - b.t);
  if (!(mismatch <= kJoinTol)) {
    std::ostringstream msg;
    msg << "biarc join inconsistent: end tangent off by " << mismatch;
    throw NumericalError(msg.str());
  }
  return out;
}

std::pair<Vec3, Vec3> eval_biarc(const Biarc& b, double s) {
  const double slack = 1e-12 * b.total_length;
  if (!(s >= -slack && s <= b.total_length + slack)) {
    throw PreconditionError("eval_biarc: arclength outside [0, total_length]");
  }
  if (s <= b.first.length) {
    const double u = std::max(s, 0.0);
    return {b.first.position(u), b.first.tangent(u)};
  }
  const double u = std::min(s - b.first.length, b.second.length);
  return {b.second.position(u), b.second.tangent(u)};
}

double biarc_parameter(const Biarc& b) {
  const auto& [a, c] = b.pair;
  const Vec3 d = c.q - a.q;
  const Vec3 to_m = b.matching_point - a.q;
  const double denom = dot(a.t, to_m) * norm2(d);
  if (!(std::abs(denom) > 1e-300)) throw NumericalError("biarc parameter: degenerate denominator");
  return dot(a.t, d) * norm2(to_m) / denom;
}

}  // namespace arcknot
