// Copyright 2026 The MECC Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: generate, solve, sweep, oracle, validate.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mecc/dual_solver.h"
#include "mecc/harness.h"
#include "mecc/oracle.h"

namespace {

using mecc::Json;

Json ReadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("'" + path + "' is not valid JSON: " + e.what());
  }
}

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out.flush()) throw std::runtime_error("write to '" + path + "' failed");
}

struct ScenarioFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> small_seed;
  std::string baseline = "full-mecc";

  void Attach(CLI::App* app) {
    app->add_option("--config", config_path, "Scenario JSON document");
    app->add_option("--seed", seed, "Scenario seed (overrides the config)");
    app->add_option("--small", small_seed,
                    "Use the desk-size random scenario with this seed");
    app->add_option("--baseline", baseline,
                    "full-mecc, cache-only or no-mecc");
  }

  mecc::InstanceConfig Resolve() const {
    mecc::InstanceConfig config;
    if (small_seed) {
      config = mecc::SmallInstanceConfig(*small_seed);
    } else if (!config_path.empty()) {
      config = mecc::ConfigFromJson(ReadJson(config_path));
    }
    if (seed) config.scenario.seed = *seed;
    return mecc::ApplyBaseline(config, mecc::ParseBaseline(baseline));
  }
};

struct SolverFlags {
  std::optional<int> max_iters;
  std::optional<double> tol;
  std::optional<std::string> mode;
  std::optional<double> step_a;
  std::optional<double> step_b;

  void Attach(CLI::App* app) {
    app->add_option("--max-iters", max_iters, "Dual iterations (default 2000)");
    app->add_option("--tol", tol, "Relative gap tolerance (default 1e-3)");
    app->add_option("--mode", mode, "centralized or distributed");
    app->add_option("--step-a", step_a, "Step numerator a in a / (b + t)");
    app->add_option("--step-b", step_b, "Step offset b in a / (b + t)");
  }

  void Apply(mecc::RunOptions& options) const {
    if (max_iters) options.max_iters = *max_iters;
    if (tol) options.tol = *tol;
    if (mode) options.mode = mecc::ParseRateMode(*mode);
    if (step_a) options.schedule.a = *step_a;
    if (step_b) options.schedule.b = *step_b;
  }
};

Json SolutionToJson(const mecc::PrimalSolution& s, const mecc::Instance& inst) {
  Json users = Json::array();
  for (int i = 0; i < inst.num_users; ++i) {
    Json compute = Json::array();
    for (int j = 0; j < inst.num_nodes; ++j) {
      if (s.y.at(i, j)) {
        compute.push_back(inst.edge_nodes.empty() ? j : inst.edge_nodes[j]);
      }
    }
    const int level = s.x.Level(i);
    users.push_back({{"user", inst.user_nodes.empty() ? i : inst.user_nodes[i]},
                     {"request",
                      inst.requests.empty() ? Json(nullptr) : Json(inst.requests[i])},
                     {"level", level + 1},
                     {"rate_bps", level >= 0 ? inst.level_rate[level] * 1e6 : 0.0},
                     {"transcode_at", compute}});
  }
  Json flows = Json::array();
  for (std::size_t p = 0; p < inst.paths.size(); ++p) {
    if (s.rates[p] <= 0.0) continue;
    const mecc::RoutedPath& path = inst.paths[p];
    Json links = Json::array();
    if (!inst.wired_link_ids.empty()) {
      for (int l : path.wired) links.push_back(inst.wired_link_ids[l]);
      links.push_back(inst.wireless_link_ids[path.wireless]);
    }
    const int source = path.source == inst.origin()
                           ? (inst.topology.nodes.empty() ? path.source
                                                          : inst.topology.Origin())
                           : (inst.edge_nodes.empty() ? path.source
                                                      : inst.edge_nodes[path.source]);
    flows.push_back({{"user", inst.user_nodes.empty() ? path.user
                                                      : inst.user_nodes[path.user]},
                     {"source", source},
                     {"k", path.k},
                     {"links", links},
                     {"rate_bps", s.rates[p] * 1e6}});
  }
  return Json{{"feasible", s.feasible},
              {"mean_utility", s.utility},
              {"users", users},
              {"flows", flows},
              {"unservable_users", s.unservable_users}};
}

int Generate(const ScenarioFlags& flags, const std::string& out) {
  const mecc::InstanceConfig config = flags.Resolve();
  const mecc::Topology topology =
      mecc::BuildHetnet(config.scenario, config.scenario.seed);
  mecc::ValidateTopology(topology, config.scenario.area_m);
  const Json doc{{"config", mecc::ConfigToJson(config)},
                 {"topology", mecc::TopologyToJson(topology)}};
  WriteText(out, doc.dump(2) + "\n");
  return 0;
}

int Solve(const ScenarioFlags& flags, const SolverFlags& solver,
          const std::string& out, const std::string& trace_path,
          bool allow_failures) {
  const mecc::InstanceConfig config = flags.Resolve();
  const mecc::Instance instance = mecc::BuildInstance(config);
  mecc::RunOptions options;
  solver.Apply(options);
  options.seed = config.scenario.seed;
  const mecc::RunResult run = mecc::Run(instance, options);
  if (!trace_path.empty()) {
    std::ostringstream csv;
    run.trace.WriteCsv(csv);
    WriteText(trace_path, csv.str());
  }
  Json doc{{"seed", config.scenario.seed},
           {"mode", mecc::ToString(options.mode)},
           {"iterations", run.iterations},
           {"converged", run.converged},
           {"best_dual", run.best_dual},
           {"gap", std::isfinite(run.gap) ? Json(run.gap) : Json(nullptr)},
           {"error", run.error}};
  if (run.has_primal || !run.best.rates.empty()) {
    doc["solution"] = SolutionToJson(run.best, instance);
  }
  WriteText(out, doc.dump(2) + "\n");
  const bool ok = run.has_primal && run.error.empty();
  if (!ok) std::cerr << "no feasible solution found" << (run.error.empty() ? "" : ": " + run.error) << "\n";
  return ok || allow_failures ? 0 : 2;
}

int Oracle(const ScenarioFlags& flags, const std::string& out) {
  const mecc::InstanceConfig config = flags.Resolve();
  const mecc::Instance instance = mecc::BuildInstance(config);
  const mecc::ExactResult exact = mecc::SolveExact(instance);
  Json doc{{"feasible", exact.feasible},
           {"optimum", exact.optimum},
           {"x_candidates", exact.x_candidates},
           {"lp_solves", exact.lp_solves}};
  if (exact.feasible) doc["solution"] = SolutionToJson(exact.solution, instance);
  WriteText(out, doc.dump(2) + "\n");
  return exact.feasible ? 0 : 2;
}

struct SweepFlags {
  std::string experiment_path;
  std::optional<std::string> axis;
  std::vector<double> values;
  std::optional<int> repetitions;
  std::vector<std::string> baselines;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string format = "csv";
  std::string out;
  bool wall_time = false;
  bool allow_failures = false;
};

int Sweep(const SweepFlags& flags, const ScenarioFlags& scenario,
          const SolverFlags& solver) {
  mecc::ExperimentSpec spec;
  if (!flags.experiment_path.empty()) {
    spec = mecc::ExperimentFromJson(ReadJson(flags.experiment_path));
  }
  if (!scenario.config_path.empty() || scenario.small_seed) {
    ScenarioFlags plain = scenario;
    plain.baseline = "full-mecc";
    spec.config = plain.Resolve();
  }
  if (flags.seed) spec.config.scenario.seed = *flags.seed;
  if (flags.axis) spec.axis = mecc::ParseSweepAxis(*flags.axis);
  if (!flags.values.empty()) spec.values = flags.values;
  if (flags.repetitions) spec.repetitions = *flags.repetitions;
  if (!flags.baselines.empty()) {
    spec.baselines.clear();
    for (const std::string& b : flags.baselines) {
      spec.baselines.push_back(mecc::ParseBaseline(b));
    }
  }
  if (flags.threads) spec.threads = *flags.threads;
  spec.record_wall_time = flags.wall_time;
  solver.Apply(spec.solver);

  const std::vector<mecc::MetricsRecord> records = mecc::RunExperiment(spec);
  const mecc::EmitFormat format = mecc::ParseEmitFormat(flags.format);
  if (flags.out.empty() || flags.out == "-") {
    std::cout << (format == mecc::EmitFormat::kCsv ? mecc::MetricsCsv(records)
                                                   : mecc::MetricsJson(records));
  } else {
    mecc::Emit(records, format, flags.out);
  }
  int failed = 0;
  for (const mecc::MetricsRecord& r : records) failed += r.failed() ? 1 : 0;
  if (failed > 0) {
    std::cerr << failed << " of " << records.size() << " runs failed\n";
    return flags.allow_failures ? 0 : 2;
  }
  return 0;
}

int Validate(const std::string& config_path, const std::string& experiment_path) {
  if (config_path.empty() && experiment_path.empty()) {
    throw std::invalid_argument("give --config and/or --experiment");
  }
  if (!config_path.empty()) {
    const mecc::InstanceConfig config = mecc::ConfigFromJson(ReadJson(config_path));
    const mecc::Topology topology =
        mecc::BuildHetnet(config.scenario, config.scenario.seed);
    mecc::ValidateTopology(topology, config.scenario.area_m);
    const mecc::Instance instance = mecc::BuildInstance(config);
    std::cout << "config ok: " << instance.num_users << " users, "
              << instance.num_nodes << " edge nodes, " << instance.paths.size()
              << " candidate paths\n";
  }
  if (!experiment_path.empty()) {
    const mecc::ExperimentSpec spec =
        mecc::ExperimentFromJson(ReadJson(experiment_path));
    std::cout << "experiment ok: " << spec.points() << " points x "
              << spec.repetitions << " repetitions x " << spec.baselines.size()
              << " baselines\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint caching, transcoding and multipath rate allocation"};
  app.require_subcommand(1);

  ScenarioFlags gen_scenario;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("generate", "Build and print a topology");
  gen_scenario.Attach(gen);
  gen->add_option("--out", gen_out, "Output path (default stdout)");

  ScenarioFlags solve_scenario;
  SolverFlags solve_solver;
  std::string solve_out;
  std::string solve_trace;
  bool solve_allow = false;
  CLI::App* solve = app.add_subcommand("solve", "Run the dual solver once");
  solve_scenario.Attach(solve);
  solve_solver.Attach(solve);
  solve->add_option("--out", solve_out, "Result JSON path (default stdout)");
  solve->add_option("--trace", solve_trace, "Write the iteration trace CSV");
  solve->add_flag("--allow-failures", solve_allow,
                  "Exit 0 even without a feasible solution");

  ScenarioFlags sweep_scenario;
  SolverFlags sweep_solver;
  SweepFlags sweep_flags;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a seeded experiment sweep");
  sweep->add_option("--experiment", sweep_flags.experiment_path,
                    "Experiment JSON document");
  sweep->add_option("--config", sweep_scenario.config_path,
                    "Scenario JSON (overrides the experiment's scenario)");
  sweep->add_option("--small", sweep_scenario.small_seed,
                    "Use the desk-size random scenario with this seed");
  sweep->add_option("--seed", sweep_flags.seed, "Base scenario seed");
  sweep->add_option("--axis", sweep_flags.axis,
                    "none, compute_capacity, cache_size or users");
  sweep->add_option("--values", sweep_flags.values, "Sweep values");
  sweep->add_option("--repetitions", sweep_flags.repetitions, "Repetitions");
  sweep->add_option("--baselines", sweep_flags.baselines,
                    "Any of full-mecc, cache-only, no-mecc");
  sweep->add_option("--threads", sweep_flags.threads, "Worker threads");
  sweep->add_option("--format", sweep_flags.format, "csv or json");
  sweep->add_option("--out", sweep_flags.out, "Metrics path (default stdout)");
  sweep->add_flag("--wall-time", sweep_flags.wall_time,
                  "Record per-run wall time (output is then not byte-stable)");
  sweep->add_flag("--allow-failures", sweep_flags.allow_failures,
                  "Exit 0 even if some runs fail");
  sweep_solver.Attach(sweep);

  ScenarioFlags oracle_scenario;
  std::string oracle_out;
  CLI::App* oracle =
      app.add_subcommand("oracle", "Solve a desk-size instance exactly");
  oracle_scenario.Attach(oracle);
  oracle->add_option("--out", oracle_out, "Output path (default stdout)");

  std::string validate_config;
  std::string validate_experiment;
  CLI::App* validate =
      app.add_subcommand("validate", "Check scenario or experiment documents");
  validate->add_option("--config", validate_config, "Scenario JSON document");
  validate->add_option("--experiment", validate_experiment,
                       "Experiment JSON document");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) return Generate(gen_scenario, gen_out);
    if (*solve) {
      return Solve(solve_scenario, solve_solver, solve_out, solve_trace,
                   solve_allow);
    }
    if (*sweep) return Sweep(sweep_flags, sweep_scenario, sweep_solver);
    if (*oracle) return Oracle(oracle_scenario, oracle_out);
    if (*validate) return Validate(validate_config, validate_experiment);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
