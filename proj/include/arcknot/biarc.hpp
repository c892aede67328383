#pragma once

#include <string_view>
#include <utility>

#include "arcknot/vec3.hpp"

namespace arcknot {

// Position with unit tangent.
struct PointTangent {
  Vec3 q;
  Vec3 t;

  PointTangent() = default;
  PointTangent(const Vec3& q_, const Vec3& t_);  // checks |t| = 1 within 1e-9

  friend bool operator==(const PointTangent&, const PointTangent&) = default;
};

enum class PairClass {
  Generic,
  CocircularCompatible,
  CocircularIncompatible,
  EqualTangentsTransversal,
  EqualTangentsPerpendicular,
};

std::string_view to_string(PairClass c);

// Circular arc (or straight segment) parametrized by arclength.
//
// The arc starts at p0 with unit tangent u0 and bends towards
// curvature_vector, whose length is the curvature. A zero curvature vector is
// a straight segment, so the flat limit needs no special casing.
struct Arc {
  Vec3 p0;
  Vec3 u0;
  Vec3 curvature_vector;
  double length = 0.0;

  // Unique arc leaving `start` along the unit tangent `tangent` that passes
  // through `end`. Throws when `end` lies behind the start on the tangent line.
  static Arc through(const Vec3& start, const Vec3& tangent, const Vec3& end);

  double curvature() const { return norm(curvature_vector); }
  Vec3 position(double s) const;
  Vec3 tangent(double s) const;
  Vec3 end_point() const { return position(length); }
  Vec3 end_tangent() const { return tangent(length); }
};

struct Biarc {
  Arc first;
  Arc second;
  Vec3 matching_point;
  std::pair<PointTangent, PointTangent> pair;
  double total_length = 0.0;
};

PairClass classify_pair(const PointTangent& a, const PointTangent& b);

// Both tangents point into the chord: <q1 - q0, t0> > 0 and <q1 - q0, t1> > 0.
bool is_proper(const PointTangent& a, const PointTangent& b);

// Matching point on the oriented subarc of the matching-point circle that is
// equidistant from both interpolated points.
Vec3 balanced_matching_point(const PointTangent& a, const PointTangent& b);

Biarc build_balanced_biarc(const PointTangent& a, const PointTangent& b);

// Position and unit tangent at arclength s in [0, total_length].
std::pair<Vec3, Vec3> eval_biarc(const Biarc& b, double s);

// <t0, d> |m - q0|^2 / (<t0, m - q0> |d|^2) with d = q1 - q0.
double biarc_parameter(const Biarc& b);

}  // namespace arcknot
