#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arcknot/curve.hpp"
#include "arcknot/energy.hpp"
#include "arcknot/interpolate.hpp"
#include "arcknot/results.hpp"

namespace arcknot {

struct ExperimentConfig {
  std::string command;
  std::string curve = "circle";
  std::vector<double> params;
  std::optional<double> q;
  std::vector<int> n_sweep = {16};
  std::string partition = "uniform";
  std::uint64_t seed = 0;
  int grid = 512;
  std::vector<int> k_sweep = {4, 8, 16, 32};
  std::string out;
  std::string format = "csv";
  bool strict_sequential = false;

  // anneal
  std::string junctions_in;
  std::string junctions_out;
  int steps = 20000;
  std::optional<double> temperature;
  double cooling = 0.995;
  double perturb = 0.0;  // radial noise applied to the interpolant
  double sigma_q = 0.05;
  double sigma_t = 0.05;
  std::optional<double> min_pair_distance;  // default 0.25 L / n

  double q_or(double fallback) const { return q.value_or(fallback); }
  Execution execution() const { return strict_sequential ? Execution::StrictSequential : Execution::Parallel; }
};

// Flat "key = value" lines; '#' starts a comment. Keys are the long CLI flag
// names without dashes.
std::map<std::string, std::string> read_config_file(std::istream& is);

// Comma separated lists.
std::vector<double> parse_real_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

// Human-readable label such as "ellipse(2,1)".
std::string curve_label(const std::string& name, const std::vector<double>& params);

// unit circle, ellipse(2, 1), torus_knot(2, 3, 2, 0.5)
std::vector<double> default_params(const std::string& name);

// Preset curve (default parameters when `params` is empty) and its arclength
// parametrization.
struct PreparedCurve {
  CurveSpec raw;
  CurveSpec arclength;
};
PreparedCurve prepare_curve(const std::string& name, const std::vector<double>& params);

// Scales every junction about the centroid by 1 + amount * U(-1, 1).
BiarcCurve perturb_radially(const BiarcCurve& beta, double amount, std::uint64_t seed);

// Each runner validates its part of the configuration (PreconditionError) and
// writes warnings to `log`.
ResultTable run_energy(const ExperimentConfig& cfg, std::ostream& log);
ResultTable run_converge(const ExperimentConfig& cfg, std::ostream& log);
ResultTable run_ropelength(const ExperimentConfig& cfg, std::ostream& log);
ResultTable run_mollify(const ExperimentConfig& cfg, std::ostream& log);
ResultTable run_anneal(const ExperimentConfig& cfg, std::ostream& log);

ResultTable run_experiment(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace arcknot
