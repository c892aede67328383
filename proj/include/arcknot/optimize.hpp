#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "arcknot/interpolate.hpp"

namespace arcknot {

struct AnnealConfig {
  double q = 4.0;
  std::size_t n = 0;  // 0 accepts the initial configuration's size
  double L = 0.0;     // gate length
  int steps = 20000;
  std::optional<double> initial_temperature;  // defaults to 0.1 * initial energy
  double cooling_rate = 0.995;
  double sigma_q = 0.05;  // position noise in units of L / n
  double sigma_t = 0.05;  // tangent noise in radians
  double min_pair_distance = 0.0;
  std::uint64_t seed = 0;
};

struct AnnealStep {
  int step = 0;
  double energy = 0.0;  // energy of the chain state after the step
  double temperature = 0.0;
  bool accepted = false;
};

struct AnnealTrace {
  std::vector<AnnealStep> steps;
  double initial_energy = 0.0;
  double best_energy = 0.0;
  int accepted = 0;
};

// Metropolis search over junction configurations. Each move perturbs one
// junction, rebuilds its two biarcs and rescales the chain back to the initial
// length, so the energy cannot drop by inflating the curve. Moves leaving the
// gated class, breaking properness, bringing two junctions closer than
// min_pair_distance, or halving the polygonal thickness proxy are rejected.
// Returns the best configuration visited.
std::pair<BiarcCurve, AnnealTrace> anneal_discrete(const BiarcCurve& initial, const AnnealConfig& cfg);

// Half the smallest distance between non-adjacent junctions.
double polygonal_thickness(const BiarcCurve& beta);

double min_junction_distance(const BiarcCurve& beta);

// step,energy,temperature,accepted
void write_trace_csv(std::ostream& os, const AnnealTrace& trace);

}  // namespace arcknot
