#pragma once

#include <cstdint>
#include <string>

#include "arcknot/curve.hpp"
#include "arcknot/interpolate.hpp"
#include "arcknot/results.hpp"

namespace arcknot {

enum class Execution {
  Parallel,          // rows of double sums may run on worker threads
  StrictSequential,  // single thread
};

// Discrete tangent-point energy
//   sum_{i != j} (2 dist(q_j + R t_j, q_i) / |q_i - q_j|^2)^q lambda_i lambda_j.
// With `gated`, configurations outside the class L/(2n) <= lambda_i <= 2L/n
// have infinite energy. Terms are accumulated in log space when q > 50.
ExtendedReal discrete_tp_energy(const BiarcCurve& beta, double q, bool gated, double L);

// Natural logarithm of the ungated discrete energy; -inf if every term is zero.
double log_discrete_tp_energy(const BiarcCurve& beta, double q);

// Double integral of r_tp^{-q} over the parameter torus, weighted by speed so
// that it is parametrization invariant. Diagonal samples use the curvature
// limit of 1/r_tp.
double continuous_tp_energy(const CurveSpec& curve, double q, int grid,
                            Execution exec = Execution::Parallel);

// (TP_k / L^2)^{1/k} evaluated in log space: the k-th power mean of 1/r_tp on
// the quadrature grid. Non-decreasing in k.
double tp_power_mean(const CurveSpec& curve, double k, int grid);

// Largest 1/r_tp over the same quadrature grid, diagonal included.
double max_inverse_tp_radius(const CurveSpec& curve, int grid);

struct ThicknessResult {
  double thickness = 0.0;
  double ropelength = 0.0;
  double curvature_bound = 0.0;  // 1 / max curvature, an upper bound on thickness
};

// Thickness as the infimal tangent-point radius: coarse grid x grid pair search
// (pairs closer than 1e-3 L skipped) followed by Nelder-Mead refinement from the
// eight best cells, combined with the local radius 1 / max curvature.
ThicknessResult thickness_and_ropelength(const CurveSpec& curve, int grid = 64);

// L^{(n-2)/n} (E_n^n)^{1/n}; +inf when beta is outside the gated class.
ExtendedReal ropelength_proxy(const BiarcCurve& beta, double L);

struct HolderCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// (E_k)^{1/k} <= (4 len(beta)^2 n(n-1)/n^2)^{1/k - 1/m} (E_m)^{1/m} for 2 <= k <= m.
HolderCheck holder_bound_check(const BiarcCurve& beta, double k, double m, double L);

struct EnergyReport {
  std::string kind;
  double q = 0.0;
  std::size_t n = 0;
  ExtendedReal value = ExtendedReal::finite(0.0);
  std::string partition;
  int grid = 0;
  std::string curve;
  std::uint64_t seed = 0;

  // CSV record: kind,q,n,value,grid,curve,seed
  static std::vector<std::string> columns();
  std::vector<Cell> row() const;
  // Single JSON object with the same fields plus the partition mode.
  std::string to_json() const;
};

}  // namespace arcknot
