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

// The three Lagrangian subproblems obtained by pricing the demand and
// content-gating constraints:
//
//   per user:  max_q  s_q - mu_i v_q + [q = Q] sum_j lambda_ij v_ij
//   per node:  max    sum_i lambda_ij v_ij y_ij   s.t. sum_i c_i y_ij <= C_j
//   network:   max    sum_p (mu_i - lambda_ij) r_p  over the capacity region
//
// All functions are pure and safe to call concurrently.

#ifndef MECC_SUBPROBLEMS_H_
#define MECC_SUBPROBLEMS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "mecc/content.h"
#include "mecc/instance.h"

namespace mecc {

struct QualityPick {
  int level = 0;  // 0-based
  double value = 0.0;
};

// Argmax over levels of scores[q] - mu * rates[q] + [q = top] * top_bonus.
// Ties go to the lower level.
QualityPick SelectQuality(std::span<const double> scores,
                          std::span<const double> rates, double mu,
                          double top_bonus);

// Same, with the bonus assembled from per-node prices: sum over hit nodes of
// lambda_row[j] * full_rate.
QualityPick SelectQuality(std::span<const double> scores,
                          std::span<const double> rates, double mu,
                          std::span<const double> lambda_row,
                          std::span<const HitStatus> hits, double full_rate);

struct KnapsackResult {
  std::vector<std::uint8_t> selected;  // per user
  std::vector<int> candidates;         // users with positive gain on a hit
  double value = 0.0;
};

// Exact 0-1 knapsack for one node. Only users with a hit and a positive
// gain are candidates. Costs are rounded up and the capacity down to
// multiples of `quantum`, then the grid is coarsened by the gcd of the
// integer costs. Among optimal subsets, lower user indices are preferred.
KnapsackResult AssignCompute(std::span<const double> gains,
                             std::span<const double> costs,
                             std::span<const HitStatus> hits, double capacity,
                             double quantum = 1e-3);

struct RateSolution {
  std::vector<double> rates;  // per path
  double objective = 0.0;
};

// Maximizes sum_p coeffs[p] * r_p over wired capacities, the shared
// spectrum budget and 0 <= r_p <= top rate. Paths with nonpositive
// coefficients stay at zero. Throws NumericalFailure if the simplex
// iteration cap trips.
RateSolution SolveRatesCentralized(const Instance& instance,
                                   std::span<const double> coeffs);

}  // namespace mecc

#endif  // MECC_SUBPROBLEMS_H_
