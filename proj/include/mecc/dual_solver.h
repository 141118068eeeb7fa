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

// Subgradient method on the Lagrangian dual of the joint quality / compute /
// rate problem. The demand equalities carry prices mu_i (free sign) and the
// content-gating inequalities carry prices lambda_ij >= 0:
//
//   D(mu, lambda) = g_x(mu, lambda) + g_r(mu, lambda) + g_y(lambda)
//
// Each evaluation of D yields candidate (X, Y, R); a primal recovery step
// turns them into a feasible point, and the best feasible point together
// with the best (smallest) dual bound is tracked across iterations.

#ifndef MECC_DUAL_SOLVER_H_
#define MECC_DUAL_SOLVER_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mecc/consensus.h"
#include "mecc/instance.h"
#include "mecc/solution.h"

namespace mecc {

enum class RateMode { kCentralized, kDistributed };

const char* ToString(RateMode mode);
RateMode ParseRateMode(const std::string& name);

// Diminishing step a / (b + t).
struct StepSchedule {
  double a = 1.0;
  double b = 10.0;

  double At(int t) const { return a / (b + t); }
};

struct DualState {
  std::vector<double> mu;      // per user
  std::vector<double> lambda;  // users x edge nodes, row-major
  int iteration = 0;
  StepSchedule schedule;
  // Unit normalization of the steps (prices are utility per Mbps while
  // subgradients are in Mbps).
  double mu_scale = 1.0;
  double lambda_scale = 1.0;

  // mu = 0, lambda = 0; both steps scaled by 1 / v_Q.
  static DualState Initial(const Instance& instance, StepSchedule schedule);
  double lambda_at(int user, int node, int nodes) const {
    return lambda[user * nodes + node];
  }
};

struct SubproblemSolutions {
  QualityChoice x;
  ComputeAssignment y;
  std::vector<double> rates;  // per path
  double g_x = 0.0;
  double g_r = 0.0;
  double g_y = 0.0;
  // False when the rates came from the consensus solver; D is then an
  // estimate rather than a certified bound.
  bool exact = true;

  double dual() const { return g_x + g_r + g_y; }
};

// Evaluates the dual function by solving every subproblem at `state`.
// Scores enter with weight 1 / |I| so that D bounds the mean utility.
SubproblemSolutions DualValue(const DualState& state, const Instance& instance,
                              RateMode mode = RateMode::kCentralized,
                              const ConsensusOptions& consensus = {});

struct Subgradient {
  std::vector<double> mu;      // z^mu_i = sum_{P_i} r - sum_q v_q x_qi
  std::vector<double> lambda;  // z^lambda_ij = sum_{P_ij} r - v_ij (x_Qi + y_ij)

  double MuNorm() const;
  double LambdaNorm() const;
};

Subgradient Subgradients(const SubproblemSolutions& solutions,
                         const Instance& instance);

// mu <- mu - tau z^mu;  lambda <- [lambda + tau z^lambda]^+.
// The lambda step moves along +z: z^lambda is the violation of the priced
// inequality, so the dual function decreases when the price rises with it.
DualState UpdateDuals(DualState state, const Subgradient& z);

// Solver-side constraint evaluation used to label solutions feasible.
FeasibilityReport EvaluatePrimal(const PrimalSolution& solution,
                                 const Instance& instance);

// Keeps X and Y from one dual evaluation, closes blocked paths and routes
// demand with a restricted LP; users whose demand cannot be met are stepped
// down one level at a time. Users unservable even at the lowest level make
// the solution infeasible and are listed.
PrimalSolution RecoverPrimal(const SubproblemSolutions& solutions,
                             const Instance& instance);

// Greedy local search from a feasible point: for each user in turn, try the
// highest level above the current one that stays routable, granting spare
// transcoding capacity on hit nodes when the level is below the top.
PrimalSolution ImprovePrimal(const PrimalSolution& start,
                             const Instance& instance);

struct TraceRow {
  int iteration = 0;
  double dual = 0.0;
  double best_dual = 0.0;
  double best_primal = 0.0;
  double gap = 0.0;
  double z_mu_norm = 0.0;
  double z_lambda_norm = 0.0;
};

struct DualTrace {
  std::vector<TraceRow> rows;

  static const char* CsvHeader();
  void WriteCsv(std::ostream& out) const;
};

struct RunOptions {
  int max_iters = 2000;
  double tol = 1e-3;
  RateMode mode = RateMode::kCentralized;
  StepSchedule schedule;
  // The iteration itself draws no random numbers; the seed is carried for
  // provenance of the instance it solves.
  std::uint64_t seed = 1;
  // Iterations the relative gap must stay below `tol` before stopping.
  int patience = 100;
  bool improve = true;
  ConsensusOptions consensus;
};

struct RunResult {
  DualTrace trace;
  PrimalSolution best;
  bool has_primal = false;
  double best_dual = 0.0;
  double gap = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string error;
};

RunResult Run(const Instance& instance, const RunOptions& options = {});

// (best_dual - best_primal) / max(1, best_dual).
double RelativeGap(double best_dual, double best_primal);

}  // namespace mecc

#endif  // MECC_DUAL_SOLVER_H_
