#include "arcknot/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "arcknot/numerics.hpp"
#include "arcknot/optimize.hpp"

namespace arcknot {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

void validate_sweep(const std::vector<int>& ns, std::size_t min_points) {
  require(!ns.empty(), "n sweep is empty");
  require(ns.size() >= min_points, "n sweep needs at least " + std::to_string(min_points) + " points");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    require(ns[i] >= 4, "every n must be at least 4");
    require(i == 0 || ns[i] > ns[i - 1], "n sweep must be strictly increasing");
  }
}

void validate_grid(int grid) { require(is_power_of_two(grid), "grid must be a power of two"); }

Partition partition_for(const ExperimentConfig& cfg, double L, int n) {
  return make_partition(L, n, PartitionMode::parse(cfg.partition), cfg.seed);
}

// Builds the interpolant at the first n with an actionable message on failure.
BiarcCurve build_or_advise(const CurveSpec& curve, const ExperimentConfig& cfg, int n, bool first) {
  try {
    return build_biarc_curve(curve, partition_for(cfg, curve.period, n));
  } catch (const NumericalError& e) {
    if (!first) throw;
    throw NumericalError(std::string(e.what()) + "; the smallest n is too coarse for this curve, try a larger n");
  }
}

}  // namespace

std::map<std::string, std::string> read_config_file(std::istream& is) {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw PreconditionError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    require(!key.empty(), "config line " + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == item.size(), "not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_real_list(text)) {
    require(v == std::floor(v) && std::abs(v) < 1e9, "not an integer: " + std::to_string(v));
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::string curve_label(const std::string& name, const std::vector<double>& params) {
  std::string out = name;
  if (params.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < params.size(); ++i) out += (i ? "," : "") + format_cell(params[i]);
  return out + ')';
}

std::vector<double> default_params(const std::string& name) {
  if (name == "circle") return {1.0};
  if (name == "ellipse") return {2.0, 1.0};
  if (name == "torus_knot") return {2.0, 3.0, 2.0, 0.5};
  return {};
}

PreparedCurve prepare_curve(const std::string& name, const std::vector<double>& params) {
  PreparedCurve c{preset_curve(name, params.empty() ? default_params(name) : params), {}};
  c.arclength = c.raw.is_arclength ? c.raw : arclength_reparametrize(c.raw);
  return c;
}

BiarcCurve perturb_radially(const BiarcCurve& beta, double amount, std::uint64_t seed) {
  require(amount >= 0.0 && amount < 1.0, "radial perturbation must lie in [0, 1)");
  Vec3 centroid;
  for (const auto& j : beta.junctions) centroid += j.q;
  centroid = centroid / static_cast<double>(beta.size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<PointTangent> moved = beta.junctions;
  for (auto& j : moved) j.q = centroid + (1.0 + amount * u(rng)) * (j.q - centroid);
  return BiarcCurve::from_junctions(std::move(moved));
}

ResultTable run_energy(const ExperimentConfig& cfg, std::ostream&) {
  validate_sweep(cfg.n_sweep, 1);
  validate_grid(cfg.grid);
  const double q = cfg.q_or(3.0);
  const auto curve = prepare_curve(cfg.curve, cfg.params);
  const double L = curve.arclength.period;
  const std::string label = curve_label(cfg.curve, cfg.params);

  ResultTable table;
  table.columns = EnergyReport::columns();
  EnergyReport cont;
  cont.kind = "continuous";
  cont.q = q;
  cont.value = ExtendedReal::finite(continuous_tp_energy(curve.raw, q, cfg.grid, cfg.execution()));
  cont.partition = "none";
  cont.grid = cfg.grid;
  cont.curve = label;
  cont.seed = cfg.seed;
  table.add_row(cont.row());
  for (std::size_t k = 0; k < cfg.n_sweep.size(); ++k) {
    const int n = cfg.n_sweep[k];
    const BiarcCurve beta = build_or_advise(curve.arclength, cfg, n, k == 0);
    EnergyReport r;
    r.kind = "discrete";
    r.q = q;
    r.n = static_cast<std::size_t>(n);
    r.value = discrete_tp_energy(beta, q, true, L);
    r.partition = cfg.partition;
    r.curve = label;
    r.seed = cfg.seed;
    table.add_row(r.row());
  }
  return table;
}

ResultTable run_converge(const ExperimentConfig& cfg, std::ostream&) {
  validate_sweep(cfg.n_sweep, 4);
  validate_grid(cfg.grid);
  const double q = cfg.q_or(3.0);
  const auto curve = prepare_curve(cfg.curve, cfg.params);
  const double L = curve.arclength.period;
  const double reference = continuous_tp_energy(curve.raw, q, cfg.grid, cfg.execution());

  std::vector<double> log_n, log_err;
  std::vector<std::vector<Cell>> rows;
  for (std::size_t k = 0; k < cfg.n_sweep.size(); ++k) {
    const int n = cfg.n_sweep[k];
    const Partition part = partition_for(cfg, L, n);
    const BiarcCurve beta = build_or_advise(curve.arclength, cfg, n, k == 0);
    const ExtendedReal e = discrete_tp_energy(beta, q, true, L);
    if (e.is_infinite()) throw NumericalError("interpolant at n = " + std::to_string(n) + " left the gated class");
    const double err = std::abs(reference - e.value());
    log_n.push_back(std::log(n));
    log_err.push_back(std::log(err));
    rows.push_back({static_cast<std::int64_t>(n), part.h_max, e.value(), reference, err});
  }
  const double slope = numerics::fitted_slope(log_n, log_err);

  ResultTable table;
  table.columns = {"n", "h_max", "discrete", "reference", "abs_error", "slope"};
  for (auto& r : rows) {
    r.push_back(slope);
    table.add_row(std::move(r));
  }
  return table;
}

ResultTable run_ropelength(const ExperimentConfig& cfg, std::ostream& log) {
  validate_sweep(cfg.n_sweep, 1);
  if (cfg.q) log << "warning: the ropelength proxy uses q = n; the q setting is ignored\n";
  const auto curve = prepare_curve(cfg.curve, cfg.params);
  const double L = curve.arclength.period;
  const double reference = thickness_and_ropelength(curve.raw).ropelength;

  ResultTable table;
  table.columns = {"n", "proxy", "reference", "gap", "rel_change"};
  double previous = std::nan("");
  for (std::size_t k = 0; k < cfg.n_sweep.size(); ++k) {
    const int n = cfg.n_sweep[k];
    const BiarcCurve beta = build_or_advise(curve.arclength, cfg, n, k == 0);
    const double proxy = ropelength_proxy(beta, L).to_double();
    const double change = std::isnan(previous) ? std::nan("") : std::abs(proxy - previous) / previous;
    table.add_row({static_cast<std::int64_t>(n), proxy, reference, std::abs(proxy - reference), change});
    previous = proxy;
  }
  return table;
}

ResultTable run_mollify(const ExperimentConfig& cfg, std::ostream&) {
  require(!cfg.k_sweep.empty(), "k sweep is empty");
  validate_grid(cfg.grid);
  const double q = cfg.q_or(3.0);
  require(q > 1.0, "mollify needs q > 1 for the seminorm order 1 - 1/q");
  const auto curve = prepare_curve(cfg.curve, cfg.params);
  const CurveSpec& c = curve.arclength;
  const double L = c.period;
  const Mollifier kernel = Mollifier::standard_bump();

  ResultTable table;
  table.columns = {"k", "epsilon", "c1_error", "seminorm"};
  constexpr int kSamples = 2048;
  for (int k : cfg.k_sweep) {
    require(k > 0, "k sweep entries must be positive");
    const double eps = 1.0 / k;
    const CurveSpec m = mollify(c, eps, kernel);
    double c1 = 0.0;
    for (int i = 0; i < kSamples; ++i) {
      const double s = L * i / kSamples;
      c1 = std::max(c1, distance(m.position(s), c.position(s)) + norm(m.derivative(s) - c.derivative(s)));
    }
    const CurveFn diff = [&](double s) { return m.derivative(s) - c.derivative(s); };
    const double semi = gagliardo_seminorm(diff, L, 1.0 - 1.0 / q, q, cfg.grid);
    table.add_row({static_cast<std::int64_t>(k), eps, c1, semi});
  }
  return table;
}

ResultTable run_anneal(const ExperimentConfig& cfg, std::ostream& log) {
  const double q = cfg.q_or(4.0);
  const auto curve = prepare_curve(cfg.curve, cfg.params);
  const double L = curve.arclength.period;

  BiarcCurve initial;
  if (!cfg.junctions_in.empty()) {
    std::ifstream in(cfg.junctions_in);
    require(static_cast<bool>(in), "cannot open junction file " + cfg.junctions_in);
    initial = read_junctions(in);
  } else {
    validate_sweep(cfg.n_sweep, 1);
    initial = build_or_advise(curve.arclength, cfg, cfg.n_sweep.front(), true);
    if (cfg.perturb > 0.0) initial = perturb_radially(initial, cfg.perturb, cfg.seed);
  }
  const double n = static_cast<double>(initial.size());

  AnnealConfig ac;
  ac.q = q;
  ac.L = L;
  ac.steps = cfg.steps;
  ac.initial_temperature = cfg.temperature;
  ac.cooling_rate = cfg.cooling;
  ac.sigma_q = cfg.sigma_q;
  ac.sigma_t = cfg.sigma_t;
  ac.min_pair_distance = cfg.min_pair_distance.value_or(0.25 * L / n);
  ac.seed = cfg.seed;
  auto [best, trace] = anneal_discrete(initial, ac);

  log << "anneal: initial energy " << format_cell(trace.initial_energy) << ", best " << format_cell(trace.best_energy)
      << ", accepted " << trace.accepted << " of " << trace.steps.size() << '\n';
  if (!cfg.junctions_out.empty()) {
    std::ofstream out(cfg.junctions_out);
    require(static_cast<bool>(out), "cannot write junction file " + cfg.junctions_out);
    write_junctions(out, best);
  }

  ResultTable table;
  table.columns = {"step", "energy", "temperature", "accepted"};
  for (const auto& s : trace.steps) {
    table.add_row({static_cast<std::int64_t>(s.step), s.energy, s.temperature, static_cast<std::int64_t>(s.accepted)});
  }
  return table;
}

ResultTable run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
  if (cfg.command == "energy") return run_energy(cfg, log);
  if (cfg.command == "converge") return run_converge(cfg, log);
  if (cfg.command == "ropelength") return run_ropelength(cfg, log);
  if (cfg.command == "mollify") return run_mollify(cfg, log);
  if (cfg.command == "anneal") return run_anneal(cfg, log);
  throw PreconditionError("unknown command '" + cfg.command + "'");
}

}  // namespace arcknot
