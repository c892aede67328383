#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arcknot/vec3.hpp"

namespace arcknot {

using CurveFn = std::function<Vec3(double)>;

// Cumulative arclength sampled at increasing parameter values; first entry is
// (0, 0), last is (period, length).
struct ArclengthTable {
  std::vector<double> parameter;
  std::vector<double> arclength;
};

// Closed curve R / period Z -> R^3 with exact derivatives.
struct CurveSpec {
  std::string name;
  double period = 0.0;
  CurveFn position;
  CurveFn derivative;
  std::optional<CurveFn> second_derivative;
  ArclengthTable arclength_table;
  bool is_arclength = false;

  double length() const { return arclength_table.arclength.back(); }
  double speed(double u) const { return norm(derivative(u)); }
  Vec3 unit_tangent(double u) const { return normalized(derivative(u)); }
  // Curvature |c' x c''| / |c'|^3; central differences of the unit tangent
  // with step 1e-4 * period when no second derivative is available.
  double curvature(double u) const;
};

// Cumulative arclength table over `cells` uniform parameter cells.
ArclengthTable build_arclength_table(const CurveFn& derivative, double period, int cells);

// Analytic test curves: circle(R), ellipse(a, b), torus_knot(p, q, R, r).
// The circle is returned unit-speed; the others in their natural parameter.
CurveSpec preset_curve(const std::string& name, const std::vector<double>& params);

// Same image, parametrized by arclength on R / length Z, starting at the
// original parameter 0.
CurveSpec arclength_reparametrize(const CurveSpec& raw, int table_cells = 2048);

CurveSpec scaled(const CurveSpec& curve, double factor);

// ---------------------------------------------------------------- partitions

struct PartitionMode {
  enum class Kind { Uniform, Jitter };
  Kind kind = Kind::Uniform;
  double rho = 0.0;

  static PartitionMode uniform() { return {}; }
  static PartitionMode jitter(double rho) { return {Kind::Jitter, rho}; }
  // "uniform" or "jitter:<rho>"
  static PartitionMode parse(const std::string& text);
  std::string to_string() const;
};

// Nodes 0 = s_0 < ... < s_n = L of the periodic domain R / L Z.
struct Partition {
  std::vector<double> nodes;
  double period = 0.0;
  double h_max = 0.0;  // largest gap
  double h_min = 0.0;  // smallest gap
  double c1 = 0.0;     // guaranteed: c1 / n <= h_min
  double c2 = 0.0;     // guaranteed: h_max <= c2 / n

  std::size_t n() const { return nodes.size() - 1; }
  double gap(std::size_t i) const { return nodes[i + 1] - nodes[i]; }
  bool is_distributed() const;
};

Partition make_partition(double L, int n, PartitionMode mode, std::uint64_t seed);

// ------------------------------------------------------------- mollification

// Non-negative profile on [-1, 1] with unit integral.
class Mollifier {
 public:
  // exp(-1 / (1 - x^2)), normalized.
  static Mollifier standard_bump();
  static Mollifier from_profile(std::function<double(double)> profile);

  double operator()(double x) const;
  // Integral of the normalized profile over [-1, 1] by fine quadrature.
  double mass() const;

 private:
  explicit Mollifier(std::function<double(double)> raw);
  std::function<double(double)> raw_;
  double scale_ = 1.0;
};

struct MollifyOptions {
  int kernel_nodes = 128;    // midpoint nodes across the kernel support
  int sample_points = 2048;  // samples of the convolution before interpolation
  int table_cells = 2048;
};

// Arclength parametrization of (L(c) / L(c_eps)) c_eps with c_eps = c * eta_eps,
// anchored at the image of parameter 0.
CurveSpec mollify(const CurveSpec& curve, double epsilon, const Mollifier& kernel,
                  const MollifyOptions& options = {});

// --------------------------------------------------------------- seminorms

// Double integral of |f(x) - f(y)|^rho / |x - y|^{1 + s rho} over the torus
// (R / L Z)^2, sampled on a uniform grid. Diagonal cells use the local
// expansion |f'(x)|^rho |x - y|^{rho (1 - s) - 1} integrated exactly.
double gagliardo_seminorm(const CurveFn& f, double period, double s, double rho, int grid);

// ------------------------------------------------------------- diagnostics

struct ModulusSample {
  double h;
  double omega;
};

struct CurveDiagnostics {
  double bilipschitz_constant = 0.0;
  std::vector<ModulusSample> modulus_samples;  // dyadic h = L/2, L/4, ...
  double max_curvature = 0.0;
};

CurveDiagnostics curve_diagnostics(const CurveSpec& curve, int grid);

// Sampled modulus of continuity of the unit tangent: max over `grid` base
// points and 16 offsets in (0, h] of |c'(s + tau) - c'(s)|.
double tangent_modulus(const CurveSpec& curve, double h, int grid = 1024);

// Largest curvature over `grid` uniform samples.
double max_curvature(const CurveSpec& curve, int grid = 2048);

}  // namespace arcknot
