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

// Distributed form of the rate subproblem. Each wired link keeps its own
// copy of the rate of every path crossing it and enforces only its own
// capacity; the radio access network keeps one more copy of every path rate
// and enforces only the spectrum budget. Copies are driven to agreement by
// prices on the consensus equalities.
//
// Each block solves a separable concave problem with a single coupling
// constraint; the price on that constraint is found by bisection. Block
// solves carry a proximal term around the current consensus value
// (augmented Lagrangian), which lets the copies settle on a vertex of the
// linear program instead of oscillating between vertices.

#ifndef MECC_CONSENSUS_H_
#define MECC_CONSENSUS_H_

#include <span>
#include <vector>

#include "mecc/instance.h"
#include "mecc/subproblems.h"

namespace mecc {

struct ConsensusOptions {
  int max_iters = 5000;
  // Stop once every copy is within this many Mbps of the consensus value
  // and the consensus value moved less than this in the last iteration.
  double tolerance = 1e-6;
  // Proximal weight; 0 derives one from the coefficient and rate scales.
  double rho = 0.0;
  bool adaptive_rho = true;
};

struct ConsensusRates {
  // wired_copies[p][n] is the copy held by the n-th wired link of path p.
  std::vector<std::vector<double>> wired_copies;
  std::vector<double> ran_copies;
  // Scaled consensus prices, laid out like the copies.
  std::vector<std::vector<double>> wired_prices;
  std::vector<double> ran_prices;
  std::vector<double> consensus;
  int iterations = 0;
  double max_disagreement = 0.0;
  bool converged = false;
};

struct DistributedRateSolution {
  ConsensusRates consensus;
  // Feasible rates: each path takes the smallest of its copies, which
  // satisfies every block constraint at once.
  RateSolution rates;
  // Set when max_iters ran out before the tolerance was met.
  bool warning = false;
};

DistributedRateSolution SolveRatesDistributed(const Instance& instance,
                                              std::span<const double> coeffs,
                                              const ConsensusOptions& options = {});

}  // namespace mecc

#endif  // MECC_CONSENSUS_H_
