#include "arcknot/geom.hpp"

#include <algorithm>
#include <string>

namespace arcknot::geom {

void require_unit(const Vec3& v, double tol, const char* what) {
  if (!is_finite(v) || std::abs(norm(v) - 1.0) > tol) {
    throw PreconditionError(std::string(what) + " must be a unit vector");
  }
}

Line::Line(const Vec3& base_, const Vec3& direction_) : base(base_), direction(direction_) {
  require_unit(direction, 1e-12, "line direction");
}

double Line::distance_to(const Vec3& p) const { return norm(cross(direction, p - base)); }

Vec3 reflect_about(const Vec3& e, const Vec3& v) {
  require_unit(e, 1e-9, "reflection axis");
  return 2.0 * dot(e, v) * e - v;
}

ExtendedReal circumradius(const Vec3& x, const Vec3& y, const Vec3& z) {
  const Vec3 a = y - x;
  const Vec3 b = z - x;
  const Vec3 c = z - y;
  const double la = norm(a);
  const double lb = norm(b);
  const double lc = norm(c);
  if (la == 0.0 || lb == 0.0 || lc == 0.0) {
    throw PreconditionError("circumradius: degenerate triple with coincident points");
  }
  // Cross product of the two edges leaving the vertex opposite the longest
  // side has the best conditioning.
  const double scale = std::max({la, lb, lc});
  double area2;
  if (scale == lc) {
    area2 = norm(cross(a, b));
  } else if (scale == lb) {
    area2 = norm(cross(-a, c));
  } else {
    area2 = norm(cross(b, c));
  }
  if (area2 < 1e-12 * scale * scale) return ExtendedReal::infinity();
  return ExtendedReal::finite(la * lb * lc / (2.0 * area2));
}

double inverse_tangent_point_radius(const Vec3& p, const Vec3& t, const Vec3& q) {
  const Vec3 d = q - p;
  const double d2 = norm2(d);
  if (d2 == 0.0) throw PreconditionError("tangent-point radius: points coincide");
  return 2.0 * norm(cross(t, d)) / d2;
}

ExtendedReal tangent_point_radius(const Vec3& p, const Vec3& t, const Vec3& q) {
  require_unit(t, 1e-9, "tangent");
  const Vec3 d = q - p;
  const double d2 = norm2(d);
  if (d2 == 0.0) throw PreconditionError("tangent-point radius: points coincide");
  const double dist = norm(cross(t, d));
  if (dist <= 1e-12 * std::sqrt(d2)) return ExtendedReal::infinity();
  return ExtendedReal::finite(d2 / (2.0 * dist));
}

Vec3 project_onto_direction(const Vec3& t, const Vec3& v) {
  require_unit(t, 1e-9, "projection direction");
  return dot(v, t) * t;
}

}  // namespace arcknot::geom
