#pragma once

#include "arcknot/vec3.hpp"

namespace arcknot::geom {

// Line through `base` with unit `direction`.
struct Line {
  Vec3 base;
  Vec3 direction;

  Line(const Vec3& base_, const Vec3& direction_);
  double distance_to(const Vec3& p) const;
};

// Reflection of v at the unit vector e, i.e. (2 e e^T - Id) v.
Vec3 reflect_about(const Vec3& e, const Vec3& v);

// Radius of the circle through three pairwise distinct points; +inf when they
// are collinear (cross product below 1e-12 * scale^2).
ExtendedReal circumradius(const Vec3& x, const Vec3& y, const Vec3& z);

// Radius of the circle through p and q that is tangent to t at p:
// |p - q|^2 / (2 dist(p + R t, q)).
ExtendedReal tangent_point_radius(const Vec3& p, const Vec3& t, const Vec3& q);

// 2 dist(p + R t, q) / |p - q|^2, the reciprocal of tangent_point_radius. Always
// finite for p != q; this is the form the energies integrate.
double inverse_tangent_point_radius(const Vec3& p, const Vec3& t, const Vec3& q);

// Orthogonal projection <v, t> t onto the span of the unit vector t.
Vec3 project_onto_direction(const Vec3& t, const Vec3& v);

void require_unit(const Vec3& v, double tol, const char* what);

}  // namespace arcknot::geom
