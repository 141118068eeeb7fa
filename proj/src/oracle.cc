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

#include "mecc/oracle.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "mecc/lp.h"

namespace mecc {

namespace {

constexpr double kTol = 1e-9;

double Slack(double bound) { return kTol * std::max(1.0, std::abs(bound)); }

// open[i * (nodes + 1) + j]: may user i draw from column j.
struct Routed {
  bool ok = false;
  std::vector<double> rates;
};

Routed RouteDemand(const Instance& instance, const std::vector<int>& levels,
                   const std::vector<std::uint8_t>& open) {
  const int cols = instance.num_nodes + 1;
  LinearProgram lp;
  std::vector<int> var_path;
  std::map<int, std::vector<LinearProgram::Term>> link_terms;
  std::vector<std::vector<LinearProgram::Term>> user_terms(instance.num_users);
  std::vector<LinearProgram::Term> radio;
  for (std::size_t p = 0; p < instance.paths.size(); ++p) {
    const RoutedPath& path = instance.paths[p];
    if (!open[path.user * cols + path.source]) continue;
    const double demand = instance.level_rate[levels[path.user]];
    const int v = lp.AddVariable(1.0, 0.0, demand);
    var_path.push_back(static_cast<int>(p));
    for (int l : path.wired) link_terms[l].push_back({v, 1.0});
    user_terms[path.user].push_back({v, 1.0});
    radio.push_back({v, 1.0 / instance.efficiency[path.wireless]});
  }
  Routed routed;
  routed.rates.assign(instance.paths.size(), 0.0);
  double wanted = 0.0;
  for (int i = 0; i < instance.num_users; ++i) {
    wanted += instance.level_rate[levels[i]];
    if (user_terms[i].empty()) return routed;
  }
  for (auto& [l, terms] : link_terms) {
    lp.AddRow(std::move(terms), instance.wired_capacity[l]);
  }
  lp.AddRow(std::move(radio), instance.bandwidth);
  for (int i = 0; i < instance.num_users; ++i) {
    lp.AddRow(std::move(user_terms[i]), instance.level_rate[levels[i]]);
  }
  const LpResult result = SolveLp(lp);
  if (result.status != LpStatus::kOptimal) return routed;
  if (result.objective < wanted - Slack(wanted)) return routed;
  for (std::size_t v = 0; v < var_path.size(); ++v) {
    routed.rates[var_path[v]] = result.x[v];
  }
  routed.ok = true;
  return routed;
}

// Subsets of `users` (as bit masks) that fit the budget and admit no
// further candidate.
std::vector<std::uint32_t> MaximalSubsets(const std::vector<int>& users,
                                          const std::vector<double>& cost,
                                          double capacity) {
  const std::uint32_t n = static_cast<std::uint32_t>(users.size());
  auto load = [&](std::uint32_t mask) {
    double sum = 0.0;
    for (std::uint32_t k = 0; k < n; ++k) {
      if (mask >> k & 1u) sum += cost[users[k]];
    }
    return sum;
  };
  std::vector<std::uint32_t> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (load(mask) > capacity + Slack(capacity)) continue;
    bool maximal = true;
    for (std::uint32_t k = 0; k < n && maximal; ++k) {
      if (mask >> k & 1u) continue;
      if (load(mask | 1u << k) <= capacity + Slack(capacity)) maximal = false;
    }
    if (maximal) out.push_back(mask);
  }
  return out;
}

}  // namespace

ExactResult SolveExact(const Instance& instance, const InstanceBound& bound) {
  const int users = instance.num_users;
  const int nodes = instance.num_nodes;
  const int levels = instance.levels();
  const int top = levels - 1;
  const int cols = nodes + 1;

  std::map<std::pair<int, int>, int> per_source;
  int worst_source = 0;
  for (const RoutedPath& path : instance.paths) {
    worst_source = std::max(worst_source, ++per_source[{path.user, path.source}]);
  }
  int hit_pairs = 0;
  for (int i = 0; i < users; ++i) {
    for (int j = 0; j < nodes; ++j) hit_pairs += instance.Hit(i, j) ? 1 : 0;
  }
  const double size = std::pow(levels, users) * std::pow(2.0, hit_pairs);
  if (users > bound.max_users || nodes > bound.max_nodes ||
      levels > bound.max_levels || worst_source > bound.max_paths_per_source ||
      size > bound.max_enumeration) {
    std::ostringstream msg;
    msg << "instance too large for exhaustive search: users=" << users
        << " nodes=" << nodes << " levels=" << levels
        << " paths_per_source=" << worst_source << " enumeration=" << size;
    throw std::length_error(msg.str());
  }

  // Level vectors in lexicographic order, user 0 most significant.
  std::vector<std::vector<int>> xs;
  std::vector<int> x(users, 0);
  while (true) {
    xs.push_back(x);
    int k = users - 1;
    while (k >= 0 && x[k] == top) x[k--] = 0;
    if (k < 0) break;
    ++x[k];
  }
  auto utility = [&](const std::vector<int>& lv) {
    std::vector<int> counts(levels, 0);
    for (int q : lv) ++counts[q];
    double sum = 0.0;
    for (int q = 0; q < levels; ++q) sum += counts[q] * instance.level_score[q];
    return users > 0 ? sum / users : 0.0;
  };
  std::vector<double> u(xs.size());
  std::vector<std::size_t> order(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    u[k] = utility(xs[k]);
    order[k] = k;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return u[a] > u[b]; });

  ExactResult result;
  for (std::size_t k : order) {
    const std::vector<int>& lv = xs[k];
    ++result.x_candidates;

    // Relaxation with every hit pair open; failing it rules out this X.
    std::vector<std::uint8_t> open(static_cast<std::size_t>(users) * cols, 0);
    for (int i = 0; i < users; ++i) {
      open[i * cols + nodes] = 1;
      for (int j = 0; j < nodes; ++j) open[i * cols + j] = instance.Hit(i, j);
    }
    ++result.lp_solves;
    if (!RouteDemand(instance, lv, open).ok) continue;

    std::vector<std::vector<int>> candidates(nodes);
    std::vector<std::vector<std::uint32_t>> subsets(nodes);
    for (int j = 0; j < nodes; ++j) {
      for (int i = 0; i < users; ++i) {
        if (lv[i] != top && instance.Hit(i, j)) candidates[j].push_back(i);
      }
      subsets[j] = MaximalSubsets(candidates[j], instance.task_cost,
                                  instance.compute_capacity[j]);
    }
    std::vector<std::size_t> pick(nodes, 0);
    while (true) {
      ComputeAssignment y(users, nodes);
      for (int i = 0; i < users; ++i) {
        open[i * cols + nodes] = 1;
        for (int j = 0; j < nodes; ++j) {
          open[i * cols + j] = instance.Hit(i, j) && lv[i] == top;
        }
      }
      for (int j = 0; j < nodes; ++j) {
        const std::uint32_t mask = subsets[j][pick[j]];
        for (std::size_t c = 0; c < candidates[j].size(); ++c) {
          if (mask >> c & 1u) {
            y.set(candidates[j][c], j, 1);
            open[candidates[j][c] * cols + j] = 1;
          }
        }
      }
      ++result.lp_solves;
      Routed routed = RouteDemand(instance, lv, open);
      if (routed.ok) {
        result.feasible = true;
        result.optimum = u[k];
        PrimalSolution& s = result.solution;
        s.x = QualityChoice(users, levels);
        for (int i = 0; i < users; ++i) s.x.Select(i, lv[i]);
        s.y = y;
        s.rates = std::move(routed.rates);
        s.utility = u[k];
        s.report = CheckFeasible(s, instance);
        s.feasible = s.report.ok();
        return result;
      }
      int j = nodes - 1;
      while (j >= 0 && pick[j] + 1 == subsets[j].size()) pick[j--] = 0;
      if (j < 0) break;
      ++pick[j];
    }
  }
  return result;
}

FeasibilityReport CheckFeasible(const PrimalSolution& solution,
                                const Instance& instance) {
  FeasibilityReport report;
  const int users = instance.num_users;
  const int nodes = instance.num_nodes;
  const int levels = instance.levels();
  auto fail = [&](bool& family, std::string why) {
    family = false;
    report.violations.push_back(std::move(why));
  };
  auto exceeds = [](double value, double bound) {
    return value > bound + Slack(bound);
  };

  if (solution.x.users() != users || solution.x.levels() != levels ||
      solution.y.users() != users || solution.y.nodes() != nodes ||
      solution.rates.size() != instance.paths.size()) {
    fail(report.domain, "shape mismatch");
    return report;
  }

  // (b) domains.
  for (int i = 0; i < users; ++i) {
    for (int q = 0; q < levels; ++q) {
      if (solution.x.at(i, q) > 1) fail(report.domain, "x not binary");
    }
    for (int j = 0; j < nodes; ++j) {
      if (solution.y.at(i, j) > 1) fail(report.domain, "y not binary");
    }
  }
  for (std::size_t p = 0; p < solution.rates.size(); ++p) {
    const double r = solution.rates[p];
    if (!(r >= 0.0) || !std::isfinite(r)) {
      fail(report.domain, "rate on path " + std::to_string(p));
    }
  }

  // (c) one level per user.
  std::vector<double> demand(users, 0.0);
  std::vector<int> top_flag(users, 0);
  for (int i = 0; i < users; ++i) {
    int chosen = 0;
    for (int q = 0; q < levels; ++q) {
      chosen += solution.x.at(i, q);
      demand[i] += instance.level_rate[q] * solution.x.at(i, q);
    }
    top_flag[i] = solution.x.at(i, levels - 1);
    if (chosen != 1) fail(report.one_level, "user " + std::to_string(i));
  }

  // (d) compute budgets; compute only where the file is cached.
  for (int j = 0; j < nodes; ++j) {
    double used = 0.0;
    for (int i = 0; i < users; ++i) {
      if (!solution.y.at(i, j)) continue;
      used += instance.task_cost[i];
      if (instance.hits.status(i, j) != HitStatus::kHit) {
        fail(report.compute, "y on a miss at node " + std::to_string(j));
      }
    }
    if (exceeds(used, instance.compute_capacity[j])) {
      fail(report.compute, "budget at node " + std::to_string(j));
    }
  }

  // (e), (f) capacities.
  std::map<int, double> link_load;
  double spectrum = 0.0;
  std::vector<double> delivered(users, 0.0);
  std::map<std::pair<int, int>, double> from_source;
  for (std::size_t p = 0; p < instance.paths.size(); ++p) {
    const RoutedPath& path = instance.paths[p];
    const double r = solution.rates[p];
    for (int l : path.wired) link_load[l] += r;
    spectrum += r / instance.efficiency[path.wireless];
    delivered[path.user] += r;
    from_source[{path.user, path.source}] += r;
  }
  for (const auto& [l, load] : link_load) {
    if (exceeds(load, instance.wired_capacity[l])) {
      fail(report.wired, "link " + std::to_string(l));
    }
  }
  if (exceeds(spectrum, instance.bandwidth)) fail(report.wireless, "spectrum");

  // (g) demand equality.
  for (int i = 0; i < users; ++i) {
    if (std::abs(delivered[i] - demand[i]) > Slack(demand[i])) {
      fail(report.demand, "user " + std::to_string(i));
    }
  }

  // (h) gating at edge nodes; the origin serves any level.
  for (const auto& [key, rate] : from_source) {
    const auto [i, j] = key;
    if (j == nodes) continue;
    const double gate = instance.hits.full_rate(i, j) *
                        (top_flag[i] + solution.y.at(i, j));
    if (exceeds(rate, gate)) {
      fail(report.gating,
           "user " + std::to_string(i) + " node " + std::to_string(j));
    }
  }
  return report;
}

}  // namespace mecc
