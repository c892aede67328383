#include "arcknot/optimize.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>

#include "arcknot/energy.hpp"

namespace arcknot {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw PreconditionError(what);
}

}  // namespace

double min_junction_distance(const BiarcCurve& beta) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < beta.size(); ++i) {
    for (std::size_t j = i + 1; j < beta.size(); ++j) {
      best = std::min(best, distance(beta.junctions[i].q, beta.junctions[j].q));
    }
  }
  return best;
}

double polygonal_thickness(const BiarcCurve& beta) {
  const std::size_t n = beta.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      best = std::min(best, distance(beta.junctions[i].q, beta.junctions[j].q));
    }
  }
  return 0.5 * best;
}

std::pair<BiarcCurve, AnnealTrace> anneal_discrete(const BiarcCurve& initial, const AnnealConfig& cfg) {
  const std::size_t n = initial.size();
  require(cfg.n == 0 || cfg.n == n, "anneal: configuration size does not match n");
  require(cfg.q >= 2.0, "anneal: q must be >= 2");
  require(cfg.L > 0.0, "anneal: gate length L must be positive");
  require(cfg.steps >= 0, "anneal: steps must be non-negative");
  require(cfg.cooling_rate > 0.0 && cfg.cooling_rate < 1.0, "anneal: cooling rate must lie in (0, 1)");
  require(cfg.sigma_q > 0.0 && cfg.sigma_t > 0.0, "anneal: move scales must be positive");
  require(cfg.min_pair_distance > 0.0, "anneal: min_pair_distance must be positive");
  require(check_Bn(initial, cfg.L, n), "anneal: initial configuration violates the length gate");
  require(min_junction_distance(initial) >= cfg.min_pair_distance,
          "anneal: initial configuration violates the minimum pair distance");

  const double length = initial.total_length;
  const double thickness_floor = 0.5 * polygonal_thickness(initial);
  const double step_q = cfg.sigma_q * cfg.L / static_cast<double>(n);

  auto energy_of = [&](const BiarcCurve& b) { return discrete_tp_energy(b, cfg.q, true, cfg.L); };

  AnnealTrace trace;
  trace.initial_energy = energy_of(initial).value();
  trace.best_energy = trace.initial_energy;
  double temperature = cfg.initial_temperature.value_or(0.1 * trace.initial_energy);
  require(temperature > 0.0, "anneal: initial temperature must be positive");

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  BiarcCurve current = initial;
  BiarcCurve best = initial;
  double e_current = trace.initial_energy;
  trace.steps.reserve(static_cast<std::size_t>(cfg.steps));

  for (int step = 0; step < cfg.steps; ++step) {
    // Draw every random number up front so the stream does not depend on
    // which checks a proposal fails.
    const std::size_t j = pick(rng);
    const Vec3 dq{gauss(rng), gauss(rng), gauss(rng)};
    const double a = gauss(rng), b = gauss(rng);
    const double coin = unit(rng);

    bool accepted = false;
    const PointTangent& old = current.junctions[j];
    const Vec3 e1 = any_orthogonal(old.t);
    const Vec3 e2 = cross(old.t, e1);
    try {
      const PointTangent moved(old.q + step_q * dq, normalized(old.t + cfg.sigma_t * (a * e1 + b * e2)));
      BiarcCurve proposal = current.with_junction(j, moved);
      proposal = scaled(proposal, length / proposal.total_length);
      if (min_junction_distance(proposal) >= cfg.min_pair_distance &&
          polygonal_thickness(proposal) >= thickness_floor) {
        const ExtendedReal e = energy_of(proposal);
        if (!e.is_infinite()) {
          const double delta = e.value() - e_current;
          if (delta <= 0.0 || coin < std::exp(-delta / temperature)) {
            current = std::move(proposal);
            e_current = e.value();
            accepted = true;
          }
        }
      }
    } catch (const NumericalError&) {
      // improper or degenerate rebuild
    } catch (const PreconditionError&) {
    }

    if (accepted) {
      ++trace.accepted;
      if (e_current < trace.best_energy) {
        trace.best_energy = e_current;
        best = current;
      }
    }
    trace.steps.push_back({step, e_current, temperature, accepted});
    temperature *= cfg.cooling_rate;
  }
  return {std::move(best), std::move(trace)};
}

void write_trace_csv(std::ostream& os, const AnnealTrace& trace) {
  os << "step,energy,temperature,accepted\n";
  char line[128];
  for (const auto& s : trace.steps) {
    std::snprintf(line, sizeof line, "%d,%.12g,%.12g,%d\n", s.step, s.energy, s.temperature, s.accepted ? 1 : 0);
    os << line;
  }
}

}  // namespace arcknot
