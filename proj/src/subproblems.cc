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

#include "mecc/subproblems.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mecc/lp.h"

namespace mecc {

namespace {

// Grid units of `amount`, rounding up (or down) unless the value already
// sits on the grid up to floating-point noise.
long long ToGrid(double amount, double quantum, bool round_up) {
  const double units = amount / quantum;
  const double nearest = std::round(units);
  if (std::abs(units - nearest) <= 1e-9 * std::max(1.0, std::abs(units))) {
    return static_cast<long long>(nearest);
  }
  return static_cast<long long>(round_up ? std::ceil(units) : std::floor(units));
}

}  // namespace

QualityPick SelectQuality(std::span<const double> scores,
                          std::span<const double> rates, double mu,
                          double top_bonus) {
  if (scores.empty() || scores.size() != rates.size()) {
    throw std::invalid_argument("quality ladder is empty or inconsistent");
  }
  const int top = static_cast<int>(scores.size()) - 1;
  QualityPick best{0, scores[0] - mu * rates[0] + (top == 0 ? top_bonus : 0.0)};
  for (int q = 1; q <= top; ++q) {
    const double value =
        scores[q] - mu * rates[q] + (q == top ? top_bonus : 0.0);
    if (value > best.value) best = {q, value};
  }
  return best;
}

QualityPick SelectQuality(std::span<const double> scores,
                          std::span<const double> rates, double mu,
                          std::span<const double> lambda_row,
                          std::span<const HitStatus> hits, double full_rate) {
  double bonus = 0.0;
  for (std::size_t j = 0; j < lambda_row.size(); ++j) {
    if (hits[j] == HitStatus::kHit) bonus += lambda_row[j] * full_rate;
  }
  return SelectQuality(scores, rates, mu, bonus);
}

KnapsackResult AssignCompute(std::span<const double> gains,
                             std::span<const double> costs,
                             std::span<const HitStatus> hits, double capacity,
                             double quantum) {
  if (capacity < 0.0) throw std::invalid_argument("capacity must be >= 0");
  if (gains.size() != costs.size() || gains.size() != hits.size()) {
    throw std::invalid_argument("knapsack inputs differ in length");
  }
  KnapsackResult result;
  result.selected.assign(gains.size(), 0);
  for (std::size_t i = 0; i < gains.size(); ++i) {
    if (hits[i] == HitStatus::kHit && gains[i] > 0.0) {
      result.candidates.push_back(static_cast<int>(i));
    }
  }
  if (result.candidates.empty()) return result;

  const long long cap = ToGrid(capacity, quantum, /*round_up=*/false);
  std::vector<int> items;
  std::vector<long long> weight;
  long long divisor = 0;
  long long total = 0;
  for (int i : result.candidates) {
    const long long w = ToGrid(costs[i], quantum, /*round_up=*/true);
    if (w < 0) throw std::invalid_argument("knapsack costs must be >= 0");
    if (w > cap) continue;
    items.push_back(i);
    weight.push_back(w);
    divisor = std::gcd(divisor, w);
    total += w;
  }
  if (items.empty()) return result;
  if (divisor == 0) divisor = 1;  // every remaining item is free
  for (long long& w : weight) w /= divisor;
  const std::size_t width =
      static_cast<std::size_t>(std::min(cap, total) / divisor) + 1;

  // best[c]: optimum over items k..m-1 with capacity c (after processing k).
  const std::size_t m = items.size();
  std::vector<double> best(width, 0.0);
  std::vector<std::uint8_t> take(m * width, 0);
  for (std::size_t k = m; k-- > 0;) {
    const double gain = gains[items[k]];
    const std::size_t w = static_cast<std::size_t>(weight[k]);
    for (std::size_t c = width; c-- > w;) {
      const double with = gain + best[c - w];
      if (with >= best[c] - 1e-12 * std::max(1.0, std::abs(with))) {
        take[k * width + c] = 1;
        best[c] = std::max(best[c], with);
      }
    }
  }
  std::size_t c = width - 1;
  for (std::size_t k = 0; k < m; ++k) {
    if (take[k * width + c]) {
      result.selected[items[k]] = 1;
      result.value += gains[items[k]];
      c -= static_cast<std::size_t>(weight[k]);
    }
  }
  return result;
}

RateSolution SolveRatesCentralized(const Instance& instance,
                                   std::span<const double> coeffs) {
  if (coeffs.size() != instance.paths.size()) {
    throw std::invalid_argument("one coefficient per path is required");
  }
  RateSolution solution;
  solution.rates.assign(instance.paths.size(), 0.0);

  LinearProgram lp;
  std::vector<int> path_of_var;
  std::vector<std::vector<LinearProgram::Term>> wired_rows(
      instance.wired_capacity.size());
  std::vector<LinearProgram::Term> spectrum_row;
  for (std::size_t p = 0; p < instance.paths.size(); ++p) {
    if (!(coeffs[p] > 0.0)) continue;
    const RoutedPath& path = instance.paths[p];
    const int var = lp.AddVariable(coeffs[p], 0.0, instance.top_rate());
    path_of_var.push_back(static_cast<int>(p));
    for (int l : path.wired) wired_rows[l].push_back({var, 1.0});
    spectrum_row.push_back({var, 1.0 / instance.efficiency[path.wireless]});
  }
  if (lp.num_vars() == 0) return solution;
  for (std::size_t l = 0; l < wired_rows.size(); ++l) {
    if (!wired_rows[l].empty()) {
      lp.AddRow(std::move(wired_rows[l]), instance.wired_capacity[l]);
    }
  }
  lp.AddRow(std::move(spectrum_row), instance.bandwidth);

  const LpResult lp_result = SolveLp(lp);
  if (lp_result.status != LpStatus::kOptimal) {
    throw NumericalFailure(std::string("rate LP ended ") +
                           ToString(lp_result.status));
  }
  for (int v = 0; v < lp.num_vars(); ++v) {
    solution.rates[path_of_var[v]] = lp_result.x[v];
  }
  solution.objective = lp_result.objective;
  return solution;
}

}  // namespace mecc
