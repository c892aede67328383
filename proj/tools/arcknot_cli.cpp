// Batch experiment runner. Exit codes: 0 success, 2 configuration error,
// 3 numerical failure.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "arcknot/experiments.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

// "--config FILE" or "--config=FILE" anywhere on the command line.
std::string find_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return "";
}

// Config keys become "--key=value" tokens placed ahead of the real arguments;
// every option takes its last value, so flags override the file.
std::vector<std::string> expand_arguments(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  const std::string path = find_config_path(argc, argv);
  if (path.empty() || args.empty()) return args;
  std::ifstream in(path);
  if (!in) throw arcknot::PreconditionError("cannot open config file " + path);
  std::vector<std::string> injected;
  for (const auto& [key, value] : arcknot::read_config_file(in)) injected.push_back("--" + key + "=" + value);
  // The subcommand name must come first for its options to parse.
  std::size_t sub = 0;
  while (sub < args.size() && args[sub].rfind("-", 0) == 0) ++sub;
  if (sub == args.size()) return args;
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub) + 1, injected.begin(), injected.end());
  return args;
}

void add_common(CLI::App* sub, arcknot::ExperimentConfig& cfg, std::optional<std::string>& params,
                std::optional<std::string>& n_list,
                std::string& config_path) {
  sub->add_option("--config", config_path, "Flat key = value file; flags override its keys");
  sub->add_option("--curve", cfg.curve, "circle | ellipse | torus_knot")->capture_default_str();
  sub->add_option("--params", params, "Comma separated curve parameters");
  sub->add_option("--q", cfg.q, "Energy exponent");
  sub->add_option("--n", n_list, "Number of biarcs (single value)");
  sub->add_option("--n-sweep", n_list, "Comma separated, strictly increasing n values");
  sub->add_option("--partition", cfg.partition, "uniform | jitter:rho")->capture_default_str();
  sub->add_option("--seed", cfg.seed, "Partition and annealing seed")->capture_default_str();
  sub->add_option("--grid", cfg.grid, "Quadrature grid, a power of two")->capture_default_str();
  sub->add_option("--out", cfg.out, "Output file (stdout when empty)");
  sub->add_option("--format", cfg.format, "csv | json")->capture_default_str();
  sub->add_flag("--strict-sequential", cfg.strict_sequential, "Single-threaded, bit-reproducible reductions");
}

}  // namespace

int main(int argc, char** argv) {
  arcknot::ExperimentConfig cfg;
  std::optional<std::string> params, n_list, k_list;
  std::string config_path;

  CLI::App app{"Biarc discretization experiments for tangent-point energies"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  auto* energy = app.add_subcommand("energy", "Continuous and discrete tangent-point energies");
  auto* converge = app.add_subcommand("converge", "Error of the discrete energy over an n sweep");
  auto* rope = app.add_subcommand("ropelength", "Ropelength proxy against the thickness reference");
  auto* moll = app.add_subcommand("mollify", "Mollified curves over an epsilon = 1/k sweep");
  auto* anneal = app.add_subcommand("anneal", "Simulated annealing of junction configurations");
  for (auto* sub : {energy, converge, rope, moll, anneal}) add_common(sub, cfg, params, n_list, config_path);

  moll->add_option("--k-sweep", k_list, "Comma separated k values (epsilon = 1/k)");
  anneal->add_option("--junctions-in", cfg.junctions_in, "Start from a junction file");
  anneal->add_option("--junctions-out", cfg.junctions_out, "Write the best configuration here");
  anneal->add_option("--steps", cfg.steps)->capture_default_str();
  anneal->add_option("--temperature", cfg.temperature, "Initial temperature (default 0.1 E0)");
  anneal->add_option("--cooling", cfg.cooling)->capture_default_str();
  anneal->add_option("--perturb", cfg.perturb, "Radial noise applied to the initial interpolant")
      ->capture_default_str();
  anneal->add_option("--sigma-q", cfg.sigma_q, "Position move scale in units of L/n")->capture_default_str();
  anneal->add_option("--sigma-t", cfg.sigma_t, "Tangent move scale in radians")->capture_default_str();
  anneal->add_option("--min-pair-distance", cfg.min_pair_distance, "Default 0.25 L/n");

  try {
    std::vector<std::string> args = expand_arguments(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  } catch (const arcknot::PreconditionError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (params) cfg.params = arcknot::parse_real_list(*params);
    if (n_list) cfg.n_sweep = arcknot::parse_int_list(*n_list);
    if (k_list) cfg.k_sweep = arcknot::parse_int_list(*k_list);
    const arcknot::Format format = arcknot::parse_format(cfg.format);

    const arcknot::ResultTable table = arcknot::run_experiment(cfg, std::cerr);
    if (cfg.out.empty()) {
      table.write(std::cout, format);
    } else {
      std::ofstream out(cfg.out);
      if (!out) throw arcknot::PreconditionError("cannot write " + cfg.out);
      table.write(out, format);
    }
  } catch (const arcknot::PreconditionError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const arcknot::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  }
  return 0;
}
