#include "lipaging/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "lipaging/errors.hpp"
#include "lipaging/validation.hpp"

namespace lipaging::cli {
namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

template <typename T>
T read_field(const json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(key, std::string("wrong type (") + e.what() + ")");
  }
}

// Flags that were given on the command line; unset ones fall through to the
// config file and then to defaults.
struct Overrides {
  std::string config;
  std::optional<std::size_t> cells;
  std::optional<std::string> graph;
  std::vector<double> shapes;
  std::vector<double> cmrs;
  std::optional<double> mobility_rate;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> threads;
  std::vector<std::size_t> li_cells;
  std::optional<std::string> out;
  double cost_offset = 0.0;
};

void add_common_options(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  cmd.add_option("--n", o.cells, "Cells in the built-in hexagonal patch");
  cmd.add_option("--graph", o.graph, "Edge-list file describing the service area");
  cmd.add_option("--out", o.out, "Output path (default: stdout)");
  cmd.add_option("--tol", o.tol, "Crossing pmf truncation tolerance");
  cmd.add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

void add_model_options(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--gamma", o.shapes, "Comma-separated residence shape values")
      ->delimiter(',');
  cmd.add_option("--cmr", o.cmrs, "Comma-separated call-to-mobility ratios")->delimiter(',');
  cmd.add_option("--lambda-m", o.mobility_rate, "Mobility rate (display only)");
}

void add_sim_options(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--samples", o.samples, "Simulated intervals per LI cell");
  cmd.add_option("--seed", o.seed, "Base RNG seed");
  cmd.add_option("--cells", o.li_cells, "Comma-separated LI cells (default: all)")
      ->delimiter(',');
}

RunConfig resolve(const Overrides& o) {
  RunConfig cfg;
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw ConfigError("config", "cannot read " + o.config);
    std::stringstream text;
    text << in.rdbuf();
    cfg = apply_json(cfg, text.str());
  }
  if (o.cells) {
    cfg.cells = *o.cells;
    cfg.graph.reset();
  }
  if (o.graph) cfg.graph = *o.graph;
  if (!o.shapes.empty()) cfg.shapes = o.shapes;
  if (!o.cmrs.empty()) cfg.cmrs = o.cmrs;
  if (o.mobility_rate) cfg.mobility_rate = *o.mobility_rate;
  if (o.tol) cfg.truncation_tol = *o.tol;
  if (o.seed) cfg.sim.seed = *o.seed;
  if (o.samples) cfg.sim.samples = *o.samples;
  if (o.threads) cfg.sim.threads = *o.threads;
  if (!o.li_cells.empty()) cfg.li_cells.assign(o.li_cells.begin(), o.li_cells.end());
  if (o.out) cfg.out = *o.out;
  cfg.cost_offset = o.cost_offset;
  cfg.check();
  return cfg;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (!cfg.out) {
    out << text;
    return;
  }
  std::ofstream file(*cfg.out, std::ios::binary);
  if (!file || !(file << text) || !file.flush()) {
    throw std::runtime_error("cannot write " + cfg.out->string());
  }
}

void warn_mobility_rate(const RunConfig& cfg, std::ostream& err) {
  if (cfg.mobility_rate != 1.0) {
    err << "warning: lambda_m=" << num(cfg.mobility_rate)
        << " is echoed only; paging costs depend on the CMR alone\n";
  }
}

std::vector<CellId> li_cells_for(const RunConfig& cfg, const CellGraph& graph) {
  if (cfg.li_cells.empty()) {
    std::vector<CellId> all(graph.size());
    for (CellId i = 0; i < all.size(); ++i) all[i] = i;
    return all;
  }
  for (CellId c : cfg.li_cells) {
    if (c >= graph.size()) {
      throw ConfigError("cells", "cell " + std::to_string(c) + " is outside the " +
                                     std::to_string(graph.size()) + "-cell area");
    }
  }
  return cfg.li_cells;
}

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

int cmd_grid(const RunConfig& cfg, std::ostream& out) {
  std::ostringstream text;
  write_graph(text, cfg.load_area());
  emit(cfg, text.str(), out);
  return kSuccess;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  warn_mobility_rate(cfg, err);
  const auto graph = cfg.load_area();
  SweepOptions options;
  options.mobility_rate = cfg.mobility_rate;
  options.truncation_tol = cfg.truncation_tol;
  options.stationary_tol = cfg.stationary_tol;
  options.threads = cfg.sim.threads;
  const auto reports = sweep(graph, cfg.shapes, cfg.cmrs, options);

  std::ostringstream csv;
  csv << "gamma,variance,cmr,total_cost,savings_vs_flooding\n";
  for (const auto& r : reports) {
    csv << num(r.shape) << ',' << num(r.variance) << ',' << num(r.cmr) << ','
        << num(r.total) << ',' << num(r.savings) << '\n';
  }
  emit(cfg, csv.str(), out);
  return kSuccess;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  warn_mobility_rate(cfg, err);
  const auto graph = cfg.load_area();
  const auto P = symmetric_random_walk(graph);
  const auto pi = stationary_distribution(P, cfg.stationary_tol);
  const auto cells = li_cells_for(cfg, graph);

  std::ostringstream csv;
  csv << "gamma,cmr,li_cell,samples,cost_estimate,cost_stderr,mean_crossings,"
         "mean_crossings_stderr,faults\n";
  std::uint64_t faults = 0;
  for (double shape : cfg.shapes) {
    const ResidenceModel model(shape, cfg.mobility_rate);
    for (double p : sorted(cfg.cmrs)) {
      const double call_rate = p * cfg.mobility_rate;
      const auto pmf = crossing_pmf(model, call_rate, cfg.truncation_tol);
      for (CellId u : cells) {
        const auto order = paging_order(location_profile(P, pmf, pi, u).probs);
        const auto tally = simulate_intervals(P, model, call_rate, u, cfg.sim, order);
        const auto cost = cost_from(tally);
        const auto crossings = crossings_from(tally);
        faults += tally.faults;
        csv << num(shape) << ',' << num(p) << ',' << u << ',' << tally.samples << ','
            << num(cost.mean) << ',' << num(cost.std_error) << ',' << num(crossings.mean)
            << ',' << num(crossings.mean_std_error) << ',' << tally.faults << '\n';
      }
    }
  }
  emit(cfg, csv.str(), out);
  if (faults > 0) {
    err << "simulate: " << faults << " intervals hit the crossing cap\n";
    return kValidationFailure;
  }
  return kSuccess;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  warn_mobility_rate(cfg, err);
  const auto graph = cfg.load_area();
  const auto P = symmetric_random_walk(graph);
  const auto pi = stationary_distribution(P, cfg.stationary_tol);
  const auto cells = li_cells_for(cfg, graph);

  std::ostringstream csv;
  csv << "gamma,cmr,li_cell,quantity,index,analytic,estimate,stderr,z\n";
  std::size_t comparisons = 0;
  std::size_t beyond_three = 0;
  std::size_t failed_cases = 0;
  std::uint64_t faults = 0;
  double worst = 0.0;
  for (double shape : cfg.shapes) {
    const ResidenceModel model(shape, cfg.mobility_rate);
    for (double p : sorted(cfg.cmrs)) {
      for (CellId u : cells) {
        const auto result = validate_case(P, pi, model, p * cfg.mobility_rate, u, cfg.sim,
                                          cfg.cost_offset, cfg.truncation_tol);
        for (const auto& row : result.rows) {
          csv << num(shape) << ',' << num(p) << ',' << u << ',' << to_string(row.quantity)
              << ',';
          if (row.index == Comparison::kPooled) {
            csv << "rest";
          } else {
            csv << row.index;
          }
          csv << ',' << num(row.analytic) << ',' << num(row.estimate) << ','
              << num(row.std_error) << ',' << num(row.z) << '\n';
          ++comparisons;
          if (std::abs(row.z) > 3.0) ++beyond_three;
        }
        worst = std::max(worst, result.max_abs_z());
        faults += result.faults;
        if (!result.passes()) ++failed_cases;
      }
    }
  }
  emit(cfg, csv.str(), out);
  err << "validate: " << comparisons << " comparisons, " << beyond_three
      << " beyond 3 sigma, max |z| = " << num(worst) << ", " << faults
      << " faulted intervals; " << (failed_cases == 0 ? "PASS" : "FAIL") << " at the "
      << num(kValidationZGate) << " sigma gate\n";
  return failed_cases == 0 ? kSuccess : kValidationFailure;
}

}  // namespace

std::vector<double> default_cmrs() {
  std::vector<double> cmrs;
  for (int i = 0; i <= 16; ++i) cmrs.push_back(std::pow(10.0, -2.0 + i / 4.0));
  return cmrs;
}

void RunConfig::check() const {
  if (!graph && cells == 0) throw ConfigError("n", "must be at least 1");
  if (shapes.empty()) throw ConfigError("gamma", "list must not be empty");
  for (double g : shapes) {
    if (!(g > 0.0) || !std::isfinite(g)) throw ConfigError("gamma", "values must be > 0");
  }
  if (cmrs.empty()) throw ConfigError("cmr", "list must not be empty");
  for (double p : cmrs) {
    if (!(p > 0.0) || !std::isfinite(p)) throw ConfigError("cmr", "values must be > 0");
  }
  if (!(mobility_rate > 0.0) || !std::isfinite(mobility_rate)) {
    throw ConfigError("lambda_m", "must be > 0");
  }
  if (!(truncation_tol > 0.0)) throw ConfigError("tol", "must be > 0");
  if (!(stationary_tol > 0.0)) throw ConfigError("stationary_tol", "must be > 0");
  if (sim.samples == 0) throw ConfigError("samples", "must be at least 1");
  if (!(sim.inversion_tol > 0.0)) throw ConfigError("inversion_tol", "must be > 0");
}

CellGraph RunConfig::load_area() const {
  if (graph) return load_graph(*graph);
  return build_hex_patch(cells);
}

RunConfig apply_json(RunConfig base, const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config", "top level must be an object");

  static const std::set<std::string> kKnown = {
      "n",    "graph",   "gamma",         "cmr",     "lambda_m", "tol", "stationary_tol",
      "seed", "samples", "inversion_tol", "threads", "cells",    "out"};
  for (const auto& [key, value] : doc.items()) {
    if (!kKnown.contains(key)) throw ConfigError(key, "unknown field");
  }

  if (doc.contains("n")) {
    base.cells = read_field<std::size_t>(doc, "n");
    base.graph.reset();
  }
  if (doc.contains("graph")) base.graph = read_field<std::string>(doc, "graph");
  if (doc.contains("gamma")) base.shapes = read_field<std::vector<double>>(doc, "gamma");
  if (doc.contains("cmr")) base.cmrs = read_field<std::vector<double>>(doc, "cmr");
  if (doc.contains("lambda_m")) base.mobility_rate = read_field<double>(doc, "lambda_m");
  if (doc.contains("tol")) base.truncation_tol = read_field<double>(doc, "tol");
  if (doc.contains("stationary_tol")) {
    base.stationary_tol = read_field<double>(doc, "stationary_tol");
  }
  if (doc.contains("seed")) base.sim.seed = read_field<std::uint64_t>(doc, "seed");
  if (doc.contains("samples")) base.sim.samples = read_field<std::size_t>(doc, "samples");
  if (doc.contains("inversion_tol")) {
    base.sim.inversion_tol = read_field<double>(doc, "inversion_tol");
  }
  if (doc.contains("threads")) base.sim.threads = read_field<std::size_t>(doc, "threads");
  if (doc.contains("cells")) base.li_cells = read_field<std::vector<CellId>>(doc, "cells");
  if (doc.contains("out")) base.out = read_field<std::string>(doc, "out");
  return base;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Last-interaction sequential paging cost under Gamma cell residence times"};
  app.require_subcommand(1);

  Overrides o;
  auto* grid = app.add_subcommand("grid", "Write the hexagonal patch as an edge list");
  auto* sweep_cmd = app.add_subcommand("sweep", "Analytic total cost over gamma x CMR");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo cost and crossing estimates");
  auto* validate = app.add_subcommand("validate", "Compare analytic values with simulation");
  for (auto* cmd : {grid, sweep_cmd, simulate, validate}) add_common_options(*cmd, o);
  for (auto* cmd : {sweep_cmd, simulate, validate}) add_model_options(*cmd, o);
  for (auto* cmd : {simulate, validate}) add_sim_options(*cmd, o);
  validate->add_option("--perturb-cost", o.cost_offset,
                       "Testing hook: add this to every analytic cost")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  }

  try {
    const RunConfig cfg = resolve(o);
    if (grid->parsed()) return cmd_grid(cfg, out);
    if (sweep_cmd->parsed()) return cmd_sweep(cfg, out, err);
    if (simulate->parsed()) return cmd_simulate(cfg, out, err);
    return cmd_validate(cfg, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  }
}

}  // namespace lipaging::cli
