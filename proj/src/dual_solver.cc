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

#include "mecc/dual_solver.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

#include "mecc/lp.h"
#include "mecc/subproblems.h"

namespace mecc {

namespace {

constexpr double kRelTol = 1e-9;

bool Within(double value, double bound) {
  return value <= bound + kRelTol * std::max(1.0, std::abs(bound));
}

struct Routing {
  bool all_met = false;
  std::vector<double> rates;
  std::vector<double> delivered;
};

bool PathOpen(const Instance& instance, const RoutedPath& path, int level,
              const ComputeAssignment& y) {
  if (path.source == instance.origin()) return true;
  if (!instance.Hit(path.user, path.source)) return false;
  return level == instance.levels() - 1 || y.at(path.user, path.source) == 1;
}

// Maximizes delivered rate with every user capped at its chosen level's
// rate; demand is met iff every cap is reached.
Routing Route(const Instance& instance, const std::vector<int>& levels,
              const ComputeAssignment& y) {
  Routing routing;
  routing.rates.assign(instance.paths.size(), 0.0);
  routing.delivered.assign(instance.num_users, 0.0);

  LinearProgram lp;
  std::vector<int> path_of_var;
  std::vector<std::vector<LinearProgram::Term>> wired_rows(
      instance.wired_capacity.size());
  std::vector<std::vector<LinearProgram::Term>> user_rows(instance.num_users);
  std::vector<LinearProgram::Term> spectrum_row;
  for (std::size_t p = 0; p < instance.paths.size(); ++p) {
    const RoutedPath& path = instance.paths[p];
    if (levels[path.user] < 0 || !PathOpen(instance, path, levels[path.user], y)) {
      continue;
    }
    const double demand = instance.level_rate[levels[path.user]];
    const int var = lp.AddVariable(1.0, 0.0, demand);
    path_of_var.push_back(static_cast<int>(p));
    for (int l : path.wired) wired_rows[l].push_back({var, 1.0});
    user_rows[path.user].push_back({var, 1.0});
    spectrum_row.push_back({var, 1.0 / instance.efficiency[path.wireless]});
  }
  if (lp.num_vars() > 0) {
    for (std::size_t l = 0; l < wired_rows.size(); ++l) {
      if (!wired_rows[l].empty()) {
        lp.AddRow(std::move(wired_rows[l]), instance.wired_capacity[l]);
      }
    }
    lp.AddRow(std::move(spectrum_row), instance.bandwidth);
    for (int i = 0; i < instance.num_users; ++i) {
      if (user_rows[i].size() > 1) {
        lp.AddRow(std::move(user_rows[i]), instance.level_rate[levels[i]]);
      }
    }
    const LpResult result = SolveLp(lp);
    if (result.status != LpStatus::kOptimal) {
      throw NumericalFailure(std::string("routing LP ended ") +
                             ToString(result.status));
    }
    for (int v = 0; v < lp.num_vars(); ++v) {
      const int p = path_of_var[v];
      routing.rates[p] = result.x[v];
      routing.delivered[instance.paths[p].user] += result.x[v];
    }
  }
  routing.all_met = true;
  for (int i = 0; i < instance.num_users; ++i) {
    const double demand = instance.level_rate[levels[i]];
    if (routing.delivered[i] < demand - kRelTol * std::max(1.0, demand)) {
      routing.all_met = false;
    }
  }
  return routing;
}

std::vector<int> LevelsOf(const QualityChoice& x) {
  std::vector<int> levels(x.users());
  for (int i = 0; i < x.users(); ++i) levels[i] = x.Level(i);
  return levels;
}

PrimalSolution Assemble(const Instance& instance, const std::vector<int>& levels,
                        const ComputeAssignment& y, std::vector<double> rates) {
  PrimalSolution solution;
  solution.x = QualityChoice(instance.num_users, instance.levels());
  for (int i = 0; i < instance.num_users; ++i) {
    solution.x.Select(i, std::max(0, levels[i]));
  }
  solution.y = y;
  solution.rates = std::move(rates);
  solution.utility = MeanUtility(solution.x, instance.level_score);
  solution.report = EvaluatePrimal(solution, instance);
  solution.feasible = solution.report.ok();
  return solution;
}

// Drops transcoding grants that carry no traffic.
void ReleaseIdleCompute(const Instance& instance, const std::vector<double>& rates,
                        ComputeAssignment& y) {
  for (int i = 0; i < instance.num_users; ++i) {
    for (int j = 0; j < instance.num_nodes; ++j) {
      if (y.at(i, j) == 0) continue;
      double carried = 0.0;
      for (int p : instance.PathsOfPair(i, j)) carried += rates[p];
      if (carried <= 0.0) y.set(i, j, 0);
    }
  }
}

std::string FormatNumber(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.10g", value);
  return buffer;
}

}  // namespace

const char* ToString(RateMode mode) {
  return mode == RateMode::kCentralized ? "centralized" : "distributed";
}

RateMode ParseRateMode(const std::string& name) {
  if (name == "centralized") return RateMode::kCentralized;
  if (name == "distributed") return RateMode::kDistributed;
  throw std::invalid_argument("unknown rate mode '" + name + "'");
}

DualState DualState::Initial(const Instance& instance, StepSchedule schedule) {
  DualState state;
  state.mu.assign(instance.num_users, 0.0);
  state.lambda.assign(
      static_cast<std::size_t>(instance.num_users) * instance.num_nodes, 0.0);
  state.schedule = schedule;
  state.mu_scale = 1.0 / instance.top_rate();
  state.lambda_scale = 1.0 / instance.top_rate();
  return state;
}

SubproblemSolutions DualValue(const DualState& state, const Instance& instance,
                              RateMode mode, const ConsensusOptions& consensus) {
  const int users = instance.num_users;
  const int nodes = instance.num_nodes;
  SubproblemSolutions out;
  out.x = QualityChoice(users, instance.levels());
  out.y = ComputeAssignment(users, nodes);

  std::vector<double> scores(instance.level_score);
  for (double& s : scores) s /= std::max(1, users);
  for (int i = 0; i < users; ++i) {
    const std::span<const double> lambda_row(
        state.lambda.data() + static_cast<std::size_t>(i) * nodes, nodes);
    const QualityPick pick =
        SelectQuality(scores, instance.level_rate, state.mu[i], lambda_row,
                      instance.hits.row(i).first(nodes), instance.top_rate());
    out.x.Select(i, pick.level);
    out.g_x += pick.value;
  }

  std::vector<double> gains(users);
  std::vector<HitStatus> hits(users);
  for (int j = 0; j < nodes; ++j) {
    for (int i = 0; i < users; ++i) {
      gains[i] = state.lambda_at(i, j, nodes) * instance.FullRate(i, j);
      hits[i] = instance.hits.status(i, j);
    }
    const KnapsackResult knapsack = AssignCompute(
        gains, instance.task_cost, hits, instance.compute_capacity[j]);
    for (int i = 0; i < users; ++i) out.y.set(i, j, knapsack.selected[i]);
    out.g_y += knapsack.value;
  }

  std::vector<double> coeffs(instance.paths.size());
  for (std::size_t p = 0; p < instance.paths.size(); ++p) {
    const RoutedPath& path = instance.paths[p];
    coeffs[p] = state.mu[path.user];
    if (path.source != instance.origin()) {
      coeffs[p] -= state.lambda_at(path.user, path.source, nodes);
    }
  }
  if (mode == RateMode::kCentralized) {
    RateSolution rates = SolveRatesCentralized(instance, coeffs);
    out.rates = std::move(rates.rates);
    out.g_r = rates.objective;
  } else {
    DistributedRateSolution rates =
        SolveRatesDistributed(instance, coeffs, consensus);
    out.rates = std::move(rates.rates.rates);
    out.g_r = rates.rates.objective;
    out.exact = false;
  }
  return out;
}

double Subgradient::MuNorm() const {
  double sq = 0.0;
  for (double v : mu) sq += v * v;
  return std::sqrt(sq);
}

double Subgradient::LambdaNorm() const {
  double sq = 0.0;
  for (double v : lambda) sq += v * v;
  return std::sqrt(sq);
}

Subgradient Subgradients(const SubproblemSolutions& solutions,
                         const Instance& instance) {
  const int users = instance.num_users;
  const int nodes = instance.num_nodes;
  const int top = instance.levels() - 1;
  Subgradient z;
  z.mu.assign(users, 0.0);
  z.lambda.assign(static_cast<std::size_t>(users) * nodes, 0.0);
  for (int i = 0; i < users; ++i) {
    double delivered = 0.0;
    for (int p : instance.PathsOfUser(i)) delivered += solutions.rates[p];
    double demand = 0.0;
    for (int q = 0; q <= top; ++q) {
      demand += instance.level_rate[q] * solutions.x.at(i, q);
    }
    z.mu[i] = delivered - demand;
    for (int j = 0; j < nodes; ++j) {
      double from_node = 0.0;
      for (int p : instance.PathsOfPair(i, j)) from_node += solutions.rates[p];
      z.lambda[static_cast<std::size_t>(i) * nodes + j] =
          from_node - instance.FullRate(i, j) *
                          (solutions.x.at(i, top) + solutions.y.at(i, j));
    }
  }
  return z;
}

DualState UpdateDuals(DualState state, const Subgradient& z) {
  const double step = state.schedule.At(state.iteration);
  for (std::size_t i = 0; i < state.mu.size(); ++i) {
    state.mu[i] -= step * state.mu_scale * z.mu[i];
  }
  for (std::size_t k = 0; k < state.lambda.size(); ++k) {
    state.lambda[k] =
        std::max(0.0, state.lambda[k] + step * state.lambda_scale * z.lambda[k]);
  }
  ++state.iteration;
  return state;
}

FeasibilityReport EvaluatePrimal(const PrimalSolution& solution,
                                 const Instance& instance) {
  FeasibilityReport report;
  const int users = instance.num_users;
  const int nodes = instance.num_nodes;
  const int top = instance.levels() - 1;
  auto flag = [&](bool& family, const std::string& what) {
    family = false;
    report.violations.push_back(what);
  };

  if (solution.rates.size() != instance.paths.size() ||
      solution.x.users() != users || solution.x.levels() != instance.levels() ||
      solution.y.users() != users || solution.y.nodes() != nodes) {
    flag(report.domain, "solution shape does not match instance");
    return report;
  }
  for (double r : solution.rates) {
    if (!std::isfinite(r) || r < 0.0) {
      flag(report.domain, "negative or non-finite rate");
      break;
    }
  }
  std::vector<int> levels(users);
  for (int i = 0; i < users; ++i) {
    levels[i] = solution.x.Level(i);
    if (levels[i] < 0) flag(report.one_level, "user " + std::to_string(i));
  }
  for (int j = 0; j < nodes; ++j) {
    double load = 0.0;
    for (int i = 0; i < users; ++i) {
      if (solution.y.at(i, j) == 0) continue;
      if (!instance.Hit(i, j)) flag(report.compute, "compute granted on a miss");
      load += instance.task_cost[i];
    }
    if (!Within(load, instance.compute_capacity[j])) {
      flag(report.compute, "node " + std::to_string(j) + " over budget");
    }
  }
  std::vector<double> wired_load(instance.wired_capacity.size(), 0.0);
  double spectrum = 0.0;
  for (std::size_t p = 0; p < instance.paths.size(); ++p) {
    const RoutedPath& path = instance.paths[p];
    for (int l : path.wired) wired_load[l] += solution.rates[p];
    spectrum += solution.rates[p] / instance.efficiency[path.wireless];
  }
  for (std::size_t l = 0; l < wired_load.size(); ++l) {
    if (!Within(wired_load[l], instance.wired_capacity[l])) {
      flag(report.wired, "wired link " + std::to_string(l));
    }
  }
  if (!Within(spectrum, instance.bandwidth)) flag(report.wireless, "spectrum");
  for (int i = 0; i < users; ++i) {
    if (levels[i] < 0) continue;
    double delivered = 0.0;
    for (int p : instance.PathsOfUser(i)) delivered += solution.rates[p];
    const double demand = instance.level_rate[levels[i]];
    if (std::abs(delivered - demand) > kRelTol * std::max(1.0, demand)) {
      flag(report.demand, "user " + std::to_string(i));
    }
    for (int j = 0; j < nodes; ++j) {
      double from_node = 0.0;
      for (int p : instance.PathsOfPair(i, j)) from_node += solution.rates[p];
      const double gate =
          instance.FullRate(i, j) * (solution.x.at(i, top) + solution.y.at(i, j));
      if (!Within(from_node, gate)) {
        flag(report.gating, "user " + std::to_string(i) + " node " +
                                std::to_string(j));
      }
    }
  }
  return report;
}

PrimalSolution RecoverPrimal(const SubproblemSolutions& solutions,
                             const Instance& instance) {
  std::vector<int> levels = LevelsOf(solutions.x);
  ComputeAssignment y = solutions.y;
  for (int i = 0; i < instance.num_users; ++i) {
    if (levels[i] < 0) levels[i] = instance.levels() - 1;
    for (int j = 0; j < instance.num_nodes; ++j) {
      if (!instance.Hit(i, j)) y.set(i, j, 0);
    }
  }

  PrimalSolution as_is = Assemble(instance, levels, y, solutions.rates);
  if (as_is.feasible) return as_is;

  while (true) {
    Routing routing = Route(instance, levels, y);
    if (routing.all_met) {
      return Assemble(instance, levels, y, std::move(routing.rates));
    }
    bool stepped = false;
    std::vector<int> unservable;
    for (int i = 0; i < instance.num_users; ++i) {
      const double demand = instance.level_rate[levels[i]];
      if (routing.delivered[i] >= demand - kRelTol * std::max(1.0, demand)) {
        continue;
      }
      if (levels[i] > 0) {
        --levels[i];
        stepped = true;
      } else {
        unservable.push_back(i);
      }
    }
    if (!stepped) {
      PrimalSolution failed =
          Assemble(instance, levels, y, std::move(routing.rates));
      failed.feasible = false;
      failed.unservable_users = std::move(unservable);
      return failed;
    }
  }
}

PrimalSolution ImprovePrimal(const PrimalSolution& start,
                             const Instance& instance) {
  if (!start.feasible) return start;
  const int top = instance.levels() - 1;
  std::vector<int> levels = LevelsOf(start.x);
  ComputeAssignment y = start.y;
  std::vector<double> rates = start.rates;

  std::vector<double> spare(instance.compute_capacity);
  for (int j = 0; j < instance.num_nodes; ++j) {
    for (int i = 0; i < instance.num_users; ++i) {
      if (y.at(i, j)) spare[j] -= instance.task_cost[i];
    }
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < instance.num_users; ++i) {
      for (int q = top; q > levels[i]; --q) {
        std::vector<int> trial_levels = levels;
        trial_levels[i] = q;
        ComputeAssignment trial_y = y;
        if (q < top) {
          for (int j = 0; j < instance.num_nodes; ++j) {
            if (instance.Hit(i, j) && trial_y.at(i, j) == 0 &&
                Within(instance.task_cost[i], spare[j])) {
              trial_y.set(i, j, 1);
            }
          }
        }
        Routing routing = Route(instance, trial_levels, trial_y);
        if (!routing.all_met) continue;
        ReleaseIdleCompute(instance, routing.rates, trial_y);
        levels = std::move(trial_levels);
        y = trial_y;
        rates = std::move(routing.rates);
        for (int j = 0; j < instance.num_nodes; ++j) {
          spare[j] = instance.compute_capacity[j];
          for (int u = 0; u < instance.num_users; ++u) {
            if (y.at(u, j)) spare[j] -= instance.task_cost[u];
          }
        }
        changed = true;
        break;
      }
    }
  }
  PrimalSolution improved = Assemble(instance, levels, y, std::move(rates));
  return improved.feasible && improved.utility >= start.utility ? improved
                                                                : start;
}

const char* DualTrace::CsvHeader() {
  return "iteration,dual,best_dual,best_primal,gap,z_mu_norm,z_lambda_norm";
}

void DualTrace::WriteCsv(std::ostream& out) const {
  out << CsvHeader() << '\n';
  for (const TraceRow& row : rows) {
    out << row.iteration << ',' << FormatNumber(row.dual) << ','
        << FormatNumber(row.best_dual) << ',' << FormatNumber(row.best_primal)
        << ',' << FormatNumber(row.gap) << ',' << FormatNumber(row.z_mu_norm)
        << ',' << FormatNumber(row.z_lambda_norm) << '\n';
  }
}

double RelativeGap(double best_dual, double best_primal) {
  if (!std::isfinite(best_primal)) return std::numeric_limits<double>::infinity();
  return (best_dual - best_primal) / std::max(1.0, std::abs(best_dual));
}

RunResult Run(const Instance& instance, const RunOptions& options) {
  RunResult result;
  result.best_dual = std::numeric_limits<double>::infinity();
  result.gap = std::numeric_limits<double>::infinity();
  double best_primal = -std::numeric_limits<double>::infinity();
  DualState state = DualState::Initial(instance, options.schedule);
  std::map<std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>>,
           PrimalSolution>
      recovered;
  int below_tol = 0;

  try {
    for (int t = 1; t <= options.max_iters; ++t) {
      const SubproblemSolutions solutions =
          DualValue(state, instance, options.mode, options.consensus);
      const double dual = solutions.dual();
      result.best_dual = std::min(result.best_dual, dual);

      auto key = std::make_pair(solutions.x.raw(), solutions.y.raw());
      auto memo = recovered.find(key);
      if (memo == recovered.end()) {
        PrimalSolution candidate = RecoverPrimal(solutions, instance);
        if (options.improve) candidate = ImprovePrimal(candidate, instance);
        memo = recovered.emplace(std::move(key), std::move(candidate)).first;
      }
      const PrimalSolution& candidate = memo->second;
      if (candidate.feasible && candidate.utility > best_primal) {
        best_primal = candidate.utility;
        result.best = candidate;
        result.has_primal = true;
      }

      const Subgradient z = Subgradients(solutions, instance);
      result.gap = RelativeGap(result.best_dual, best_primal);
      result.trace.rows.push_back({t, dual, result.best_dual, best_primal,
                                   result.gap, z.MuNorm(), z.LambdaNorm()});
      result.iterations = t;

      if (result.gap <= 0.0) {
        result.converged = true;
        break;
      }
      below_tol = result.gap < options.tol ? below_tol + 1 : 0;
      if (below_tol >= options.patience) {
        result.converged = true;
        break;
      }
      state = UpdateDuals(std::move(state), z);
    }
  } catch (const std::exception& e) {
    result.error = e.what();
  }
  if (!result.has_primal && !recovered.empty()) {
    // Keep the last infeasible attempt so callers can report why.
    result.best = recovered.rbegin()->second;
  }
  return result;
}

}  // namespace mecc
