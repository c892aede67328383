#include "arcknot/curve.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include "arcknot/numerics.hpp"

namespace arcknot {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

// Periodic quintic Hermite interpolant through samples of position, first and
// second derivative on a uniform grid.
class QuinticHermite {
 public:
  QuinticHermite(double period, std::vector<Vec3> p, std::vector<Vec3> d, std::vector<Vec3> a)
      : period_(period), h_(period / static_cast<double>(p.size())), p_(std::move(p)),
        d_(std::move(d)), a_(std::move(a)) {}

  // Value, first or second derivative.
  Vec3 eval(double x, int order) const {
    const double u = numerics::wrap(x, period_) / h_;
    const auto n = p_.size();
    auto i = static_cast<std::size_t>(u);
    if (i >= n) i = n - 1;
    const double t = u - static_cast<double>(i);
    const std::size_t j = (i + 1) % n;
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    std::array<double, 6> b{};
    double scale = 1.0;
    if (order == 0) {
      b = {1 - 10 * t3 + 15 * t4 - 6 * t5,   t - 6 * t3 + 8 * t4 - 3 * t5,
           0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5, 0.5 * t3 - t4 + 0.5 * t5,
           -4 * t3 + 7 * t4 - 3 * t5,        10 * t3 - 15 * t4 + 6 * t5};
    } else if (order == 1) {
      b = {-30 * t2 + 60 * t3 - 30 * t4,      1 - 18 * t2 + 32 * t3 - 15 * t4,
           t - 4.5 * t2 + 6 * t3 - 2.5 * t4,  1.5 * t2 - 4 * t3 + 2.5 * t4,
           -12 * t2 + 28 * t3 - 15 * t4,      30 * t2 - 60 * t3 + 30 * t4};
      scale = 1.0 / h_;
    } else {
      b = {-60 * t + 180 * t2 - 120 * t3,     -36 * t + 96 * t2 - 60 * t3,
           1 - 9 * t + 18 * t2 - 10 * t3,     3 * t - 12 * t2 + 10 * t3,
           -24 * t + 84 * t2 - 60 * t3,       60 * t - 180 * t2 + 120 * t3};
      scale = 1.0 / (h_ * h_);
    }
    const Vec3 v = b[0] * p_[i] + (b[1] * h_) * d_[i] + (b[2] * h_ * h_) * a_[i] +
                   (b[3] * h_ * h_) * a_[j] + (b[4] * h_) * d_[j] + b[5] * p_[j];
    return scale * v;
  }

 private:
  double period_;
  double h_;
  std::vector<Vec3> p_, d_, a_;
};

// Inverse of the cumulative arclength of a raw curve.
class ArclengthInverse {
 public:
  ArclengthInverse(CurveSpec raw, int cells) : raw_(std::move(raw)) {
    table_ = build_arclength_table(raw_.derivative, raw_.period, cells);
    speed_.reserve(table_.parameter.size());
    for (double u : table_.parameter) speed_.push_back(raw_.speed(u));
    length_ = table_.arclength.back();
    const double typical = length_ / raw_.period;
    for (std::size_t k = 0; k + 1 < table_.parameter.size(); ++k) {
      const double mid = 0.5 * (table_.parameter[k] + table_.parameter[k + 1]);
      if (!(std::min(speed_[k], raw_.speed(mid)) > 1e-8 * typical)) {
        std::ostringstream msg;
        msg << "arclength reparametrization: vanishing speed near parameter " << table_.parameter[k];
        throw NumericalError(msg.str());
      }
    }
  }

  double length() const { return length_; }
  const CurveSpec& raw() const { return raw_; }

  double parameter_at(double s) const {
    s = numerics::wrap(s, length_);
    const auto& S = table_.arclength;
    const auto& U = table_.parameter;
    std::size_t k = static_cast<std::size_t>(std::upper_bound(S.begin(), S.end(), s) - S.begin());
    k = std::clamp<std::size_t>(k, 1, S.size() - 1) - 1;
    const double ds = S[k + 1] - S[k];
    const double du = U[k + 1] - U[k];
    const double tau = (s - S[k]) / ds;

    // Monotone cubic Hermite guess (Fritsch-Carlson limited slopes du/ds).
    const double secant = du / ds;
    double m0 = 1.0 / speed_[k];
    double m1 = 1.0 / speed_[k + 1];
    const double a = m0 / secant, b = m1 / secant;
    if (a * a + b * b > 9.0) {
      const double shrink = 3.0 / std::sqrt(a * a + b * b);
      m0 *= shrink;
      m1 *= shrink;
    }
    const double t2 = tau * tau, t3 = t2 * tau;
    double u = (2 * t3 - 3 * t2 + 1) * U[k] + (t3 - 2 * t2 + tau) * ds * m0 +
               (-2 * t3 + 3 * t2) * U[k + 1] + (t3 - t2) * ds * m1;

    // Newton polish on the exact cumulative length.
    auto speed = [this](double v) { return raw_.speed(v); };
    for (int it = 0; it < 8; ++it) {
      const double residual = S[k] + numerics::gauss_legendre(speed, U[k], u) - s;
      const double step = residual / raw_.speed(u);
      u = std::clamp(u - step, U[k], U[k + 1]);
      if (std::abs(step) <= 1e-15 * raw_.period) break;
    }
    return u;
  }

 private:
  CurveSpec raw_;
  ArclengthTable table_;
  std::vector<double> speed_;
  double length_ = 0.0;
};

}  // namespace

double CurveSpec::curvature(double u) const {
  const Vec3 v = derivative(u);
  const double sp = norm(v);
  if (second_derivative) return norm(cross(v, (*second_derivative)(u))) / (sp * sp * sp);
  const double h = 1e-4 * period;
  return norm(unit_tangent(u + h) - unit_tangent(u - h)) / (2.0 * h * sp);
}

ArclengthTable build_arclength_table(const CurveFn& derivative, double period, int cells) {
  require(cells >= 8, "arclength table needs at least 8 cells");
  require(period > 0.0, "curve period must be positive");
  ArclengthTable table;
  table.parameter.resize(cells + 1);
  table.arclength.resize(cells + 1);
  auto speed = [&](double u) { return norm(derivative(u)); };
  double acc = 0.0;
  for (int k = 0; k <= cells; ++k) {
    const double u = period * static_cast<double>(k) / cells;
    if (k > 0) acc += numerics::gauss_legendre(speed, table.parameter[k - 1], u);
    table.parameter[k] = u;
    table.arclength[k] = acc;
  }
  if (!std::isfinite(acc) || !(acc > 0.0)) throw NumericalError("curve has zero or non-finite length");
  return table;
}

CurveSpec preset_curve(const std::string& name, const std::vector<double>& params) {
  CurveSpec c;
  c.name = name;
  if (name == "circle") {
    require(params.size() == 1, "circle expects one parameter (radius)");
    const double R = params[0];
    require(R > 0.0, "circle radius must be positive");
    c.period = kTwoPi * R;
    c.position = [R](double s) { return Vec3{R * std::cos(s / R), R * std::sin(s / R), 0.0}; };
    c.derivative = [R](double s) { return Vec3{-std::sin(s / R), std::cos(s / R), 0.0}; };
    c.second_derivative = [R](double s) {
      return Vec3{-std::cos(s / R) / R, -std::sin(s / R) / R, 0.0};
    };
    c.is_arclength = true;
  } else if (name == "ellipse") {
    require(params.size() == 2, "ellipse expects two parameters (a, b)");
    const double a = params[0], b = params[1];
    require(a > 0.0 && b > 0.0, "ellipse semi-axes must be positive");
    c.period = kTwoPi;
    c.position = [a, b](double u) { return Vec3{a * std::cos(u), b * std::sin(u), 0.0}; };
    c.derivative = [a, b](double u) { return Vec3{-a * std::sin(u), b * std::cos(u), 0.0}; };
    c.second_derivative = [a, b](double u) { return Vec3{-a * std::cos(u), -b * std::sin(u), 0.0}; };
  } else if (name == "torus_knot") {
    require(params.size() == 4, "torus_knot expects four parameters (p, q, R, r)");
    const double p = params[0], q = params[1], R = params[2], r = params[3];
    require(p >= 1 && q >= 1 && p == std::floor(p) && q == std::floor(q),
            "torus_knot winding numbers must be positive integers");
    require(r > 0.0 && R > r, "torus_knot radii must satisfy R > r > 0");
    c.period = kTwoPi;
    c.position = [=](double u) {
      const double rho = R + r * std::cos(q * u);
      return Vec3{rho * std::cos(p * u), rho * std::sin(p * u), r * std::sin(q * u)};
    };
    c.derivative = [=](double u) {
      const double rho = R + r * std::cos(q * u);
      const double drho = -r * q * std::sin(q * u);
      const double cp = std::cos(p * u), sp = std::sin(p * u);
      return Vec3{drho * cp - p * rho * sp, drho * sp + p * rho * cp, r * q * std::cos(q * u)};
    };
    c.second_derivative = [=](double u) {
      const double rho = R + r * std::cos(q * u);
      const double drho = -r * q * std::sin(q * u);
      const double ddrho = -r * q * q * std::cos(q * u);
      const double cp = std::cos(p * u), sp = std::sin(p * u);
      return Vec3{ddrho * cp - 2 * p * drho * sp - p * p * rho * cp,
                  ddrho * sp + 2 * p * drho * cp - p * p * rho * sp, -r * q * q * std::sin(q * u)};
    };
  } else {
    throw PreconditionError("unknown curve preset '" + name + "'");
  }
  c.arclength_table = build_arclength_table(c.derivative, c.period, 2048);
  return c;
}

CurveSpec arclength_reparametrize(const CurveSpec& raw, int table_cells) {
  auto inv = std::make_shared<const ArclengthInverse>(raw, table_cells);
  CurveSpec out;
  out.name = raw.name;
  out.period = inv->length();
  out.position = [inv](double s) { return inv->raw().position(inv->parameter_at(s)); };
  out.derivative = [inv](double s) { return inv->raw().unit_tangent(inv->parameter_at(s)); };
  if (raw.second_derivative) {
    out.second_derivative = [inv](double s) {
      const double u = inv->parameter_at(s);
      const Vec3 v = inv->raw().derivative(u);
      const Vec3 a = (*inv->raw().second_derivative)(u);
      const double sp2 = norm2(v);
      return (a - (dot(a, v) / sp2) * v) / sp2;
    };
  }
  out.is_arclength = true;
  const double L = out.period;
  out.arclength_table.parameter = {0.0, L};
  out.arclength_table.arclength = {0.0, L};
  return out;
}

CurveSpec scaled(const CurveSpec& curve, double factor) {
  require(factor > 0.0, "scale factor must be positive");
  CurveSpec out = curve;
  out.position = [f = curve.position, factor](double u) { return factor * f(u); };
  out.derivative = [f = curve.derivative, factor](double u) { return factor * f(u); };
  if (curve.second_derivative) {
    out.second_derivative = [f = *curve.second_derivative, factor](double u) { return factor * f(u); };
  }
  out.is_arclength = curve.is_arclength && factor == 1.0;
  for (double& s : out.arclength_table.arclength) s *= factor;
  return out;
}

// ---------------------------------------------------------------- partitions

PartitionMode PartitionMode::parse(const std::string& text) {
  if (text == "uniform") return uniform();
  const std::string prefix = "jitter:";
  if (text.rfind(prefix, 0) == 0) {
    try {
      std::size_t used = 0;
      const std::string tail = text.substr(prefix.size());
      const double rho = std::stod(tail, &used);
      if (used == tail.size()) return jitter(rho);
    } catch (const std::exception&) {
    }
  }
  throw PreconditionError("partition mode must be 'uniform' or 'jitter:<rho>', got '" + text + "'");
}

std::string PartitionMode::to_string() const {
  if (kind == Kind::Uniform) return "uniform";
  std::ostringstream os;
  os << "jitter:" << rho;
  return os.str();
}

bool Partition::is_distributed() const {
  const double nn = static_cast<double>(n());
  const double slack = 1e-12 * period;
  return h_min >= c1 / nn - slack && h_max <= c2 / nn + slack && h_max <= period / 2 + slack;
}

Partition make_partition(double L, int n, PartitionMode mode, std::uint64_t seed) {
  require(L > 0.0, "partition length must be positive");
  require(n >= 4, "partition needs at least 4 intervals");
  const bool jitter = mode.kind == PartitionMode::Kind::Jitter;
  require(!jitter || (mode.rho >= 0.0 && mode.rho < 0.4), "jitter amplitude must lie in [0, 0.4)");

  Partition p;
  p.period = L;
  p.c1 = jitter ? (1.0 - 2.0 * mode.rho) * L : L;
  p.c2 = jitter ? (1.0 + 2.0 * mode.rho) * L : L;
  const double h = L / n;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> offset(-1.0, 1.0);
  constexpr int kRetries = 16;
  for (int attempt = 0; attempt < kRetries; ++attempt) {
    p.nodes.assign(n + 1, 0.0);
    for (int i = 1; i < n; ++i) {
      p.nodes[i] = i * h + (jitter ? mode.rho * h * offset(rng) : 0.0);
    }
    p.nodes[n] = L;
    p.h_max = 0.0;
    p.h_min = L;
    for (int i = 0; i < n; ++i) {
      p.h_max = std::max(p.h_max, p.gap(i));
      p.h_min = std::min(p.h_min, p.gap(i));
    }
    if (p.h_min > 0.0 && p.is_distributed()) return p;
  }
  throw NumericalError("could not generate a partition satisfying the distribution bounds");
}

// ------------------------------------------------------------- mollification

Mollifier::Mollifier(std::function<double(double)> raw) : raw_(std::move(raw)) {
  // Fine composite Gauss-Legendre; profiles are smooth or at least continuous.
  constexpr int kCells = 512;
  double total = 0.0;
  for (int k = 0; k < kCells; ++k) {
    const double a = -1.0 + 2.0 * k / kCells;
    total += numerics::gauss_legendre([this](double x) { return raw_(x); }, a, a + 2.0 / kCells);
  }
  if (!(total > 0.0) || !std::isfinite(total)) throw PreconditionError("mollifier profile has no mass");
  scale_ = 1.0 / total;
}

Mollifier Mollifier::standard_bump() {
  return Mollifier([](double x) { return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; });
}

Mollifier Mollifier::from_profile(std::function<double(double)> profile) {
  return Mollifier([p = std::move(profile)](double x) {
    if (std::abs(x) > 1.0) return 0.0;
    const double v = p(x);
    if (v < 0.0) throw PreconditionError("mollifier profile must be non-negative");
    return v;
  });
}

double Mollifier::operator()(double x) const { return scale_ * raw_(x); }

double Mollifier::mass() const {
  constexpr int kCells = 1024;
  double total = 0.0;
  for (int k = 0; k < kCells; ++k) {
    const double a = -1.0 + 2.0 * k / kCells;
    total += numerics::gauss_legendre(*this, a, a + 2.0 / kCells);
  }
  return total;
}

CurveSpec mollify(const CurveSpec& curve, double epsilon, const Mollifier& kernel,
                  const MollifyOptions& options) {
  require(curve.is_arclength, "mollify expects an arclength-parametrized curve");
  const double L = curve.period;
  require(epsilon > 0.0 && epsilon < L / 4.0, "mollification width must satisfy 0 < eps < L/4");
  require(options.kernel_nodes >= 8 && options.sample_points >= 64, "mollify resolution too small");

  // Midpoint nodes on [-1, 1]; weights renormalized to unit total mass so the
  // discrete kernel is an exact averaging operator.
  std::vector<double> offsets, weights;
  double total = 0.0;
  for (int j = 0; j < options.kernel_nodes; ++j) {
    const double y = -1.0 + (j + 0.5) * 2.0 / options.kernel_nodes;
    const double w = kernel(y);
    if (w <= 0.0) continue;
    offsets.push_back(epsilon * y);
    weights.push_back(w);
    total += w;
  }
  if (!(total > 0.0)) throw NumericalError("mollifier vanishes on all quadrature nodes");
  for (double& w : weights) w /= total;

  CurveFn second = curve.second_derivative ? *curve.second_derivative : CurveFn([&curve](double s) {
    const double h = 1e-5 * curve.period;
    return (curve.derivative(s + h) - curve.derivative(s - h)) / (2.0 * h);
  });

  const int N = options.sample_points;
  std::vector<Vec3> P(N), D(N), A(N);
  for (int i = 0; i < N; ++i) {
    const double x = L * i / N;
    Vec3 p, d, a;
    for (std::size_t j = 0; j < offsets.size(); ++j) {
      const double s = x - offsets[j];
      p += weights[j] * curve.position(s);
      d += weights[j] * curve.derivative(s);
      a += weights[j] * second(s);
    }
    if (!is_finite(p) || !is_finite(d) || !is_finite(a)) throw NumericalError("mollify: non-finite convolution");
    P[i] = p;
    D[i] = d;
    A[i] = a;
  }

  auto interp = std::make_shared<const QuinticHermite>(L, std::move(P), std::move(D), std::move(A));
  CurveSpec smooth;
  smooth.name = curve.name + "_mollified";
  smooth.period = L;
  smooth.position = [interp](double x) { return interp->eval(x, 0); };
  smooth.derivative = [interp](double x) { return interp->eval(x, 1); };
  smooth.second_derivative = [interp](double x) { return interp->eval(x, 2); };
  smooth.arclength_table = build_arclength_table(smooth.derivative, L, options.table_cells);

  const double speed_floor = 1e-6;
  for (double u : smooth.arclength_table.parameter) {
    if (!(smooth.speed(u) > speed_floor)) throw NumericalError("mollify: speed collapse of the convolution");
  }
  const double factor = L / smooth.length();
  return arclength_reparametrize(scaled(smooth, factor), options.table_cells);
}

// --------------------------------------------------------------- seminorms

double gagliardo_seminorm(const CurveFn& f, double period, double s, double rho, int grid) {
  require(grid >= 64, "seminorm grid must be at least 64");
  require(s > 0.0 && s < 1.0, "seminorm order s must lie in (0, 1)");
  require(rho >= 1.0, "seminorm exponent rho must be >= 1");
  require(period > 0.0, "seminorm period must be positive");
  const int N = grid;
  const double dx = period / N;
  std::vector<Vec3> samples(N);
  for (int i = 0; i < N; ++i) {
    samples[i] = f(dx * i);
    if (!is_finite(samples[i])) throw NumericalError("seminorm: non-finite sample");
  }

  std::vector<double> by_offset;
  by_offset.reserve(N);
  const double power = 1.0 + s * rho;
  for (int k = 1; k < N; ++k) {
    const double dist = std::min(k, N - k) * dx;
    std::vector<double> row(N);
    for (int i = 0; i < N; ++i) row[i] = std::pow(norm(samples[i] - samples[(i + k) % N]), rho);
    by_offset.push_back(numerics::pairwise_sum(row) / std::pow(dist, power));
  }
  const double off_diagonal = dx * dx * numerics::pairwise_sum(by_offset);

  const double alpha = rho * (1.0 - s) - 1.0;
  const double cell = 2.0 * std::pow(dx, alpha + 2.0) / ((alpha + 1.0) * (alpha + 2.0));
  std::vector<double> diag(N);
  for (int i = 0; i < N; ++i) {
    const Vec3 slope = (samples[(i + 1) % N] - samples[(i + N - 1) % N]) / (2.0 * dx);
    diag[i] = std::pow(norm(slope), rho) * cell;
  }
  return off_diagonal + numerics::pairwise_sum(diag);
}

// ------------------------------------------------------------- diagnostics

double tangent_modulus(const CurveSpec& curve, double h, int grid) {
  require(h > 0.0, "modulus offset must be positive");
  constexpr int kOffsets = 16;
  double omega = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double s = curve.period * i / grid;
    const Vec3 t0 = curve.unit_tangent(s);
    for (int j = 1; j <= kOffsets; ++j) {
      omega = std::max(omega, norm(curve.unit_tangent(s + h * j / kOffsets) - t0));
    }
  }
  return omega;
}

double max_curvature(const CurveSpec& curve, int grid) {
  double best = 0.0;
  for (int i = 0; i < grid; ++i) best = std::max(best, curve.curvature(curve.period * i / grid));
  return best;
}

CurveDiagnostics curve_diagnostics(const CurveSpec& curve, int grid) {
  require(curve.is_arclength, "curve diagnostics expect an arclength-parametrized curve");
  require(grid >= 8, "diagnostics grid must be at least 8");
  const double L = curve.period;
  const double ds = L / grid;
  std::vector<Vec3> pos(grid), tan(grid);
  for (int i = 0; i < grid; ++i) {
    pos[i] = curve.position(ds * i);
    tan[i] = curve.unit_tangent(ds * i);
  }

  CurveDiagnostics out;
  for (int i = 0; i < grid; ++i) {
    for (int j = i + 1; j < grid; ++j) {
      const double chord = distance(pos[i], pos[j]);
      const double gap = std::min(j - i, grid - (j - i)) * ds;
      if (!(chord > 1e-12 * L)) {
        std::ostringstream msg;
        msg << "self-intersection: zero chord between parameters " << ds * i << " and " << ds * j;
        throw NumericalError(msg.str());
      }
      out.bilipschitz_constant = std::max(out.bilipschitz_constant, gap / chord);
    }
  }

  for (int m = grid / 2; m >= 1; m /= 2) {
    double omega = 0.0;
    for (int i = 0; i < grid; ++i) {
      for (int j = 1; j <= m; ++j) omega = std::max(omega, norm(tan[(i + j) % grid] - tan[i]));
    }
    out.modulus_samples.push_back({m * ds, omega});
  }

  for (int i = 0; i < grid; ++i) out.max_curvature = std::max(out.max_curvature, curve.curvature(ds * i));
  return out;
}

}  // namespace arcknot
