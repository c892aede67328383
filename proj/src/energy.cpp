#include "arcknot/energy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "arcknot/geom.hpp"
#include "arcknot/numerics.hpp"

namespace arcknot {

namespace {

constexpr double kLogSpaceThreshold = 50.0;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

// Runs body(i) for i in [0, count). Results must be written to disjoint slots
// so the outcome does not depend on scheduling.
template <class Body>
void for_each_index(std::size_t count, Execution exec, Body&& body) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (exec == Execution::StrictSequential || hw == 1 || count < 64) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < hw; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += hw) body(i);
    });
  }
  for (auto& t : workers) t.join();
}

// x_ij = 2 dist(l(q_j), q_i) / |q_i - q_j|^2 for every ordered pair i != j.
double discrete_ratio(const BiarcCurve& beta, std::size_t i, std::size_t j) {
  const Vec3 d = beta.junctions[i].q - beta.junctions[j].q;
  const double d2 = norm2(d);
  if (!(d2 > 0.0)) {
    throw NumericalError("coincident junction points " + std::to_string(i) + " and " + std::to_string(j));
  }
  return 2.0 * norm(cross(beta.junctions[j].t, d)) / d2;
}

std::vector<double> log_terms(const BiarcCurve& beta, double q) {
  const std::size_t n = beta.size();
  std::vector<double> logs;
  logs.reserve(n * (n - 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double x = discrete_ratio(beta, i, j);
      logs.push_back(x > 0.0 ? q * std::log(x) + std::log(beta.lambdas[i]) + std::log(beta.lambdas[j]) : kNegInf);
    }
  }
  return logs;
}

double direct_energy(const BiarcCurve& beta, double q) {
  const std::size_t n = beta.size();
  std::vector<double> terms;
  terms.reserve(n * (n - 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      terms.push_back(std::pow(discrete_ratio(beta, i, j), q) * beta.lambdas[i] * beta.lambdas[j]);
    }
  }
  return numerics::pairwise_sum(terms);
}

struct Samples {
  std::vector<Vec3> pos, tan;
  std::vector<double> weight, curvature;
  double du = 0.0;
  double period = 0.0;
};

Samples sample_curve(const CurveSpec& curve, int grid) {
  require(grid >= 8, "quadrature grid must be at least 8");
  Samples s;
  s.period = curve.period;
  s.du = curve.period / grid;
  s.pos.resize(grid);
  s.tan.resize(grid);
  s.weight.resize(grid);
  s.curvature.resize(grid);
  for (int i = 0; i < grid; ++i) {
    const double u = s.du * i;
    const Vec3 v = curve.derivative(u);
    s.pos[i] = curve.position(u);
    s.weight[i] = norm(v);
    s.tan[i] = v / s.weight[i];
    s.curvature[i] = curve.curvature(u);
  }
  return s;
}

// 1/r_tp between sample i (tangent) and sample j, curvature on the diagonal.
double inverse_radius(const Samples& s, std::size_t i, std::size_t j, double collapse_tol) {
  if (i == j) return s.curvature[i];
  const Vec3 d = s.pos[j] - s.pos[i];
  const double d2 = norm2(d);
  if (!(d2 > collapse_tol * collapse_tol)) {
    throw NumericalError("curve is not embedded: chord collapse between samples " + std::to_string(i) + " and " +
                         std::to_string(j));
  }
  return 2.0 * norm(cross(s.tan[i], d)) / d2;
}

// ----------------------------------------------------------- Nelder-Mead

struct Simplex2 {
  std::array<std::array<double, 2>, 3> x;
  std::array<double, 3> f;
};

// Maximizes f from the triangle `start`; returns the best vertex value.
// Throws NumericalError if the simplex does not contract within the budget.
template <class F>
double nelder_mead_max(F&& f, Simplex2 sx, double size_tol, double* best_bracket) {
  constexpr int kMaxIter = 4000;
  for (int k = 0; k < 3; ++k) sx.f[k] = f(sx.x[k][0], sx.x[k][1]);
  for (int it = 0; it < kMaxIter; ++it) {
    std::array<int, 3> order = {0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return sx.f[a] > sx.f[b]; });
    const int best = order[0], mid = order[1], worst = order[2];
    const double spread = sx.f[best] - sx.f[worst];
    double size = 0.0;
    for (int k = 0; k < 3; ++k) {
      size = std::max({size, std::abs(sx.x[k][0] - sx.x[best][0]), std::abs(sx.x[k][1] - sx.x[best][1])});
    }
    *best_bracket = sx.f[best];
    if (spread <= 1e-14 * std::max(std::abs(sx.f[best]), 1e-300) || size <= size_tol) return sx.f[best];

    const std::array<double, 2> c = {0.5 * (sx.x[best][0] + sx.x[mid][0]), 0.5 * (sx.x[best][1] + sx.x[mid][1])};
    auto along = [&](double t) {
      return std::array<double, 2>{c[0] + t * (sx.x[worst][0] - c[0]), c[1] + t * (sx.x[worst][1] - c[1])};
    };
    const auto xr = along(-1.0);
    const double fr = f(xr[0], xr[1]);
    if (fr > sx.f[best]) {
      const auto xe = along(-2.0);
      const double fe = f(xe[0], xe[1]);
      if (fe > fr) {
        sx.x[worst] = xe;
        sx.f[worst] = fe;
      } else {
        sx.x[worst] = xr;
        sx.f[worst] = fr;
      }
      continue;
    }
    if (fr > sx.f[mid]) {
      sx.x[worst] = xr;
      sx.f[worst] = fr;
      continue;
    }
    const auto xc = fr > sx.f[worst] ? along(-0.5) : along(0.5);
    const double fc = f(xc[0], xc[1]);
    if (fc > std::max(fr, sx.f[worst])) {
      sx.x[worst] = xc;
      sx.f[worst] = fc;
      continue;
    }
    for (int k : {mid, worst}) {
      sx.x[k] = {0.5 * (sx.x[k][0] + sx.x[best][0]), 0.5 * (sx.x[k][1] + sx.x[best][1])};
      sx.f[k] = f(sx.x[k][0], sx.x[k][1]);
    }
  }
  std::ostringstream msg;
  msg << "thickness refinement did not converge; best 1/r_tp bracket " << *best_bracket;
  throw NumericalError(msg.str());
}

}  // namespace

// ------------------------------------------------------------ discrete

ExtendedReal discrete_tp_energy(const BiarcCurve& beta, double q, bool gated, double L) {
  require(q >= 2.0, "discrete tangent-point energy requires q >= 2");
  if (gated && !check_Bn(beta, L, beta.size())) return ExtendedReal::infinity();
  if (q <= kLogSpaceThreshold) return ExtendedReal::finite(direct_energy(beta, q));
  const double value = std::exp(log_discrete_tp_energy(beta, q));
  if (!std::isfinite(value)) throw NumericalError("discrete energy overflows; use the log-space form");
  return ExtendedReal::finite(value);
}

double log_discrete_tp_energy(const BiarcCurve& beta, double q) {
  require(q >= 2.0, "discrete tangent-point energy requires q >= 2");
  return numerics::log_sum_exp(log_terms(beta, q));
}

ExtendedReal ropelength_proxy(const BiarcCurve& beta, double L) {
  const std::size_t n = beta.size();
  if (!check_Bn(beta, L, n)) return ExtendedReal::infinity();
  const double nn = static_cast<double>(n);
  const double log_proxy = (nn - 2.0) / nn * std::log(L) + log_discrete_tp_energy(beta, nn) / nn;
  return ExtendedReal::finite(std::exp(log_proxy));
}

HolderCheck holder_bound_check(const BiarcCurve& beta, double k, double m, double L) {
  require(k >= 2.0 && k <= m, "Hoelder comparison requires 2 <= k <= m");
  const std::size_t n = beta.size();
  if (!check_Bn(beta, L, n)) throw PreconditionError("Hoelder comparison requires a configuration in the gated class");
  const double nn = static_cast<double>(n);
  const double len = beta.total_length;
  const double log_lhs = log_discrete_tp_energy(beta, k) / k;
  const double log_rhs = (1.0 / k - 1.0 / m) * std::log(4.0 * len * len * nn * (nn - 1.0) / (nn * nn)) +
                         log_discrete_tp_energy(beta, m) / m;
  HolderCheck out;
  out.lhs = std::exp(log_lhs);
  out.rhs = std::exp(log_rhs);
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-12);
  return out;
}

// ---------------------------------------------------------- continuous

double continuous_tp_energy(const CurveSpec& curve, double q, int grid, Execution exec) {
  require(q >= 2.0, "tangent-point energy requires q >= 2");
  const Samples s = sample_curve(curve, grid);
  const double collapse_tol = 1e-12 * curve.length();
  const std::size_t N = s.pos.size();
  std::vector<double> rows(N);
  for_each_index(N, exec, [&](std::size_t i) {
    std::vector<double> row(N);
    for (std::size_t j = 0; j < N; ++j) row[j] = std::pow(inverse_radius(s, i, j, collapse_tol), q) * s.weight[j];
    rows[i] = s.weight[i] * numerics::pairwise_sum(row);
  });
  return s.du * s.du * numerics::pairwise_sum(rows);
}

double tp_power_mean(const CurveSpec& curve, double k, int grid) {
  require(k >= 1.0, "power mean order must be >= 1");
  const Samples s = sample_curve(curve, grid);
  const double collapse_tol = 1e-12 * curve.length();
  const std::size_t N = s.pos.size();
  std::vector<double> logs;
  logs.reserve(N * N);
  std::vector<double> weights;
  weights.reserve(N);
  for (std::size_t i = 0; i < N; ++i) {
    weights.push_back(s.weight[i]);
    for (std::size_t j = 0; j < N; ++j) {
      const double x = inverse_radius(s, i, j, collapse_tol);
      logs.push_back(x > 0.0 ? k * std::log(x) + std::log(s.weight[i] * s.weight[j]) : kNegInf);
    }
  }
  const double log_mass = 2.0 * std::log(numerics::pairwise_sum(weights));
  return std::exp((numerics::log_sum_exp(logs) - log_mass) / k);
}

double max_inverse_tp_radius(const CurveSpec& curve, int grid) {
  const Samples s = sample_curve(curve, grid);
  const double collapse_tol = 1e-12 * curve.length();
  double best = 0.0;
  for (std::size_t i = 0; i < s.pos.size(); ++i) {
    for (std::size_t j = 0; j < s.pos.size(); ++j) best = std::max(best, inverse_radius(s, i, j, collapse_tol));
  }
  return best;
}

ThicknessResult thickness_and_ropelength(const CurveSpec& curve, int grid) {
  require(grid >= 8, "thickness grid must be at least 8");
  const double P = curve.period;
  // Closer pairs lose accuracy to cancellation in t x d and are represented by
  // the curvature, their limit.
  const double near = 1e-3 * P;
  auto inv_radius = [&](double u, double v) {
    if (numerics::periodic_distance(u, v, P) < near) return curve.curvature(u);
    return geom::inverse_tangent_point_radius(curve.position(u), curve.unit_tangent(u), curve.position(v));
  };

  // Local part: the diagonal limit of 1/r_tp is the curvature.
  const int fine = 8 * grid;
  double kappa_max = 0.0;
  int kappa_arg = 0;
  for (int i = 0; i < fine; ++i) {
    const double k = curve.curvature(P * i / fine);
    if (k > kappa_max) {
      kappa_max = k;
      kappa_arg = i;
    }
  }
  {
    // Golden-section polish of the curvature maximum.
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = P * (kappa_arg - 1) / fine, b = P * (kappa_arg + 1) / fine;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = curve.curvature(c), fd = curve.curvature(d);
    for (int it = 0; it < 80 && b - a > 1e-12 * P; ++it) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = curve.curvature(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = curve.curvature(d);
      }
    }
    kappa_max = std::max({kappa_max, fc, fd});
  }

  // Non-local part: coarse pair grid, then Nelder-Mead from the best cells.
  const double cell = P / grid;
  struct Candidate {
    double value;
    int i, j;
  };
  std::vector<Candidate> coarse;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      if (numerics::periodic_distance(cell * i, cell * j, P) < near) continue;
      coarse.push_back({inv_radius(cell * i, cell * j), i, j});
    }
  }
  constexpr std::size_t kStarts = 8;
  const std::size_t starts = std::min(kStarts, coarse.size());
  std::partial_sort(coarse.begin(), coarse.begin() + static_cast<std::ptrdiff_t>(starts), coarse.end(),
                    [](const Candidate& a, const Candidate& b) { return a.value > b.value; });

  double sup = kappa_max;
  for (std::size_t k = 0; k < starts; ++k) {
    const double u = cell * coarse[k].i, v = cell * coarse[k].j;
    Simplex2 sx;
    sx.x = {{{u, v}, {u + 0.5 * cell, v}, {u, v + 0.5 * cell}}};
    double bracket = coarse[k].value;
    sup = std::max(sup, nelder_mead_max(inv_radius, sx, 1e-12 * P, &bracket));
  }
  if (!(sup > 0.0) || !std::isfinite(sup)) throw NumericalError("thickness: no finite positive curvature found");

  ThicknessResult out;
  out.thickness = 1.0 / sup;
  out.ropelength = curve.length() / out.thickness;
  out.curvature_bound = kappa_max > 0.0 ? 1.0 / kappa_max : std::numeric_limits<double>::infinity();
  return out;
}

// --------------------------------------------------------------- report

std::vector<std::string> EnergyReport::columns() { return {"kind", "q", "n", "value", "grid", "curve", "seed"}; }

std::vector<Cell> EnergyReport::row() const {
  return {kind,
          q,
          static_cast<std::int64_t>(n),
          value.to_double(),
          static_cast<std::int64_t>(grid),
          curve,
          static_cast<std::int64_t>(seed)};
}

std::string EnergyReport::to_json() const {
  ResultTable t;
  t.columns = columns();
  t.columns.push_back("partition");
  std::vector<Cell> r = row();
  r.push_back(partition);
  t.add_row(std::move(r));
  std::ostringstream os;
  t.write_json(os);
  const std::string array = os.str();
  // strip the enclosing array brackets
  const auto open = array.find('{'), close = array.rfind('}');
  return array.substr(open, close - open + 1);
}

}  // namespace arcknot
