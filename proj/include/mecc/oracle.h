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

// Exact reference solver for desk-size instances, plus a constraint checker
// that shares no code with the solvers.

#ifndef MECC_ORACLE_H_
#define MECC_ORACLE_H_

#include <cstdint>

#include "mecc/instance.h"
#include "mecc/solution.h"

namespace mecc {

struct InstanceBound {
  int max_users = 5;
  int max_nodes = 4;   // edge nodes; the origin is not counted
  int max_levels = 3;
  int max_paths_per_source = 2;
  // Q^|I| * 2^(number of hit (user, edge node) pairs).
  double max_enumeration = 1e7;
};

struct ExactResult {
  bool feasible = false;
  PrimalSolution solution;  // meaningful only when feasible
  double optimum = 0.0;
  std::int64_t x_candidates = 0;  // quality vectors examined
  std::int64_t lp_solves = 0;
};

// Scans quality vectors by decreasing mean utility, ties broken by the
// lexicographically smallest vector of levels; the first one that admits
// some compute assignment and rate vector is optimal. Only maximal
// budget-feasible compute sets on hit pairs are tried, which loses nothing
// because opening more paths never hurts.
//
// Throws std::length_error when the instance exceeds `bound`.
ExactResult SolveExact(const Instance& instance, const InstanceBound& bound = {});

// Re-evaluates every constraint family with 1e-9 relative tolerance.
FeasibilityReport CheckFeasible(const PrimalSolution& solution,
                                const Instance& instance);

}  // namespace mecc

#endif  // MECC_ORACLE_H_
