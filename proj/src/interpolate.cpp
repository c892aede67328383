#include "arcknot/interpolate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "arcknot/numerics.hpp"

namespace arcknot {

namespace {

Biarc build_segment(const std::vector<PointTangent>& junctions, std::size_t i) {
  const std::size_t n = junctions.size();
  const PointTangent& a = junctions[i];
  const PointTangent& b = junctions[(i + 1) % n];
  if (!is_proper(a, b) || classify_pair(a, b) == PairClass::CocircularIncompatible) {
    std::ostringstream msg;
    msg << "segment " << i << " (junctions " << i << " -> " << (i + 1) % n
        << ") is not a proper compatible point-tangent pair";
    throw NumericalError(msg.str());
  }
  return build_balanced_biarc(a, b);
}

void refresh_lengths(BiarcCurve& c) {
  const std::size_t n = c.biarcs.size();
  c.lambdas.resize(n);
  c.offsets.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    c.lambdas[i] = c.biarcs[i].total_length;
    c.offsets[i + 1] = c.offsets[i] + c.lambdas[i];
  }
  c.total_length = c.offsets[n];
}

}  // namespace

BiarcCurve BiarcCurve::from_junctions(std::vector<PointTangent> junctions) {
  if (junctions.size() < 3) throw PreconditionError("a closed biarc curve needs at least 3 junctions");
  BiarcCurve c;
  c.junctions = std::move(junctions);
  c.biarcs.reserve(c.junctions.size());
  for (std::size_t i = 0; i < c.junctions.size(); ++i) c.biarcs.push_back(build_segment(c.junctions, i));
  refresh_lengths(c);
  return c;
}

BiarcCurve BiarcCurve::with_junction(std::size_t j, const PointTangent& pt) const {
  const std::size_t n = size();
  if (j >= n) throw PreconditionError("junction index out of range");
  BiarcCurve c = *this;
  c.source_nodes.clear();
  c.junctions[j] = pt;
  const std::size_t prev = (j + n - 1) % n;
  c.biarcs[prev] = build_segment(c.junctions, prev);
  c.biarcs[j] = build_segment(c.junctions, j);
  refresh_lengths(c);
  return c;
}

BiarcCurve build_biarc_curve(const CurveSpec& curve, const Partition& partition, const BuildOptions& options) {
  if (!curve.is_arclength) throw PreconditionError("biarc interpolation expects an arclength-parametrized curve");
  const double L = curve.period;
  if (std::abs(partition.period - L) > 1e-9 * L) {
    throw PreconditionError("partition period does not match the curve length");
  }
  if (partition.h_max > L / 2) throw PreconditionError("partition gap exceeds half the curve length");
  const std::size_t n = partition.n();

  if (options.enforce_smallness) {
    const double omega = tangent_modulus(curve, partition.h_max, options.modulus_grid);
    if (omega >= 0.5) {
      std::size_t worst = 0;
      for (std::size_t i = 1; i < n; ++i) {
        if (partition.gap(i) > partition.gap(worst)) worst = i;
      }
      std::ostringstream msg;
      msg << "smallness condition violated: tangent modulus " << omega << " >= 1/2 at gap "
          << partition.gap(worst) << " (segment " << worst << ")";
      throw PreconditionError(msg.str());
    }
  }

  std::vector<PointTangent> junctions;
  junctions.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = partition.nodes[i];
    junctions.emplace_back(curve.position(s), curve.unit_tangent(s));
  }
  BiarcCurve c = BiarcCurve::from_junctions(std::move(junctions));
  c.source_nodes = partition.nodes;
  return c;
}

std::pair<Vec3, Vec3> eval_biarc_curve(const BiarcCurve& beta, double s) {
  const double u = numerics::wrap(s, beta.total_length);
  const auto& off = beta.offsets;
  auto it = std::upper_bound(off.begin(), off.end(), u);
  std::size_t i = static_cast<std::size_t>(it - off.begin());
  i = std::clamp<std::size_t>(i, 1, beta.size()) - 1;
  const double local = std::clamp(u - off[i], 0.0, beta.lambdas[i]);
  return eval_biarc(beta.biarcs[i], local);
}

bool check_Bn(const BiarcCurve& beta, double L, std::size_t n) {
  if (beta.size() != n) throw PreconditionError("check_Bn: biarc count does not match n");
  const double lo = L / (2.0 * static_cast<double>(n));
  const double hi = 2.0 * L / static_cast<double>(n);
  return std::all_of(beta.lambdas.begin(), beta.lambdas.end(),
                     [&](double lam) { return lam >= lo && lam <= hi; });
}

double c1_distance(const CurveSpec& curve, const BiarcCurve& beta, int grid) {
  const std::size_t n = beta.size();
  if (grid < static_cast<int>(2 * n)) throw PreconditionError("c1_distance: grid must be at least 2n");
  if (beta.source_nodes.size() != n + 1) {
    throw PreconditionError("c1_distance needs a biarc curve interpolated from a partition");
  }
  const auto& nodes = beta.source_nodes;
  const double L = nodes.back();
  double sup = 0.0;
  for (int g = 0; g < grid; ++g) {
    const double s = L * g / grid;
    auto it = std::upper_bound(nodes.begin(), nodes.end(), s);
    std::size_t i = std::clamp<std::size_t>(static_cast<std::size_t>(it - nodes.begin()), 1, n) - 1;
    const double gap = nodes[i + 1] - nodes[i];
    const double rate = beta.lambdas[i] / gap;
    const auto [p, t] = eval_biarc(beta.biarcs[i], std::clamp((s - nodes[i]) * rate, 0.0, beta.lambdas[i]));
    const double d = distance(curve.position(s), p) + norm(curve.derivative(s) - rate * t);
    sup = std::max(sup, d);
  }
  return sup;
}

BiarcCurve scaled(const BiarcCurve& beta, double factor) {
  if (!(factor > 0.0)) throw PreconditionError("scale factor must be positive");
  std::vector<PointTangent> j = beta.junctions;
  for (auto& pt : j) pt.q *= factor;
  return BiarcCurve::from_junctions(std::move(j));
}

void write_junctions(std::ostream& os, const BiarcCurve& beta) {
  char line[256];
  for (std::size_t i = 0; i < beta.size(); ++i) {
    const auto& [q, t] = beta.junctions[i];
    std::snprintf(line, sizeof line, "%.17g %.17g %.17g %.17g %.17g %.17g %.17g\n", q.x, q.y, q.z, t.x, t.y,
                  t.z, beta.lambdas[i]);
    os << line;
  }
}

BiarcCurve read_junctions(std::istream& is) {
  std::vector<PointTangent> junctions;
  std::vector<double> lambdas;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    Vec3 q, t;
    double lambda = 0.0;
    if (!(fields >> q.x >> q.y >> q.z >> t.x >> t.y >> t.z >> lambda)) {
      throw PreconditionError("junction record " + std::to_string(lineno) + ": expected 7 numbers");
    }
    std::string rest;
    if (fields >> rest) throw PreconditionError("junction record " + std::to_string(lineno) + ": trailing data");
    if (std::abs(norm(t) - 1.0) > 1e-6) {
      throw PreconditionError("junction record " + std::to_string(lineno) + ": tangent is not a unit vector");
    }
    // Exact records are kept bit-for-bit; hand-edited ones get renormalized.
    junctions.emplace_back(q, std::abs(norm(t) - 1.0) <= 1e-12 ? t : normalized(t));
    lambdas.push_back(lambda);
  }
  BiarcCurve c = BiarcCurve::from_junctions(std::move(junctions));
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (std::abs(c.lambdas[i] - lambdas[i]) > 1e-9 * std::max(1.0, lambdas[i])) {
      throw PreconditionError("junction record " + std::to_string(i) + ": stored biarc length disagrees with rebuild");
    }
  }
  return c;
}

}  // namespace arcknot
