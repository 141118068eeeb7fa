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

#include <random>
#include <sstream>
#include <stdexcept>

#include <gtest/gtest.h>

#include "mecc/harness.h"
#include "mecc/oracle.h"
#include "testing/fixtures.h"

namespace mecc {
namespace {

using testing::InstanceBuilder;
using testing::OneCellInstance;

TEST(DualValueTest, ZeroPricesGiveTopScore) {
  const Instance instance = BuildInstance(SmallInstanceConfig(3));
  const DualState state = DualState::Initial(instance, {});
  const SubproblemSolutions s = DualValue(state, instance);
  EXPECT_NEAR(s.g_x, instance.level_score.back(), 1e-12);
  EXPECT_EQ(s.g_r, 0.0);
  EXPECT_EQ(s.g_y, 0.0);
  EXPECT_NEAR(s.dual(), instance.level_score.back(), 1e-12);
  for (int i = 0; i < instance.num_users; ++i) {
    EXPECT_EQ(s.x.Level(i), instance.levels() - 1);
  }
}

TEST(DualValueTest, NegativeRatePricesShutAllPaths) {
  const Instance instance = BuildInstance(SmallInstanceConfig(4));
  DualState state = DualState::Initial(instance, {});
  for (double& mu : state.mu) mu = -0.1;
  for (double& l : state.lambda) l = 0.05;
  const SubproblemSolutions s = DualValue(state, instance);
  EXPECT_EQ(s.g_r, 0.0);
  for (double r : s.rates) EXPECT_EQ(r, 0.0);
}

// D at arbitrary prices bounds the exact optimum from above.
TEST(DualValueTest, WeakDualityAgainstOracle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> mu(-0.2, 0.5);
  std::uniform_real_distribution<double> lambda(0.0, 0.3);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Instance instance = BuildInstance(SmallInstanceConfig(seed));
    const ExactResult exact = SolveExact(instance);
    ASSERT_TRUE(exact.feasible);
    for (int trial = 0; trial < 10; ++trial) {
      DualState state = DualState::Initial(instance, {});
      for (double& m : state.mu) m = mu(rng);
      for (double& l : state.lambda) l = lambda(rng);
      EXPECT_GE(DualValue(state, instance).dual(), exact.optimum - 1e-9)
          << "seed " << seed;
    }
  }
}

Instance TwoLevelCell() {
  InstanceBuilder b({2.0, 8.0}, {1.0, 2.0}, 1, 1);
  const int w = b.Wired(100.0);
  const int radio = b.Radio(10.0);
  b.Hit(0, 0).Path(0, 0, {w}, radio).Path(0, 1, {w}, radio);
  return b.Build();
}

SubproblemSolutions Solutions(const Instance& instance, int level,
                              std::vector<double> rates, int y = 0) {
  SubproblemSolutions s;
  s.x = QualityChoice(instance.num_users, instance.levels());
  s.x.Select(0, level);
  s.y = ComputeAssignment(instance.num_users, instance.num_nodes);
  s.y.set(0, 0, y);
  s.rates = std::move(rates);
  return s;
}

TEST(SubgradientsTest, DemandShortfall) {
  const Instance instance = TwoLevelCell();
  const Subgradient z = Subgradients(Solutions(instance, 1, {2.0, 3.0}), instance);
  EXPECT_DOUBLE_EQ(z.mu[0], -3.0);
}

TEST(SubgradientsTest, TightGateIsZero) {
  InstanceBuilder b({1.0, 2.0}, {1.0, 2.0}, 1, 1);
  const int w = b.Wired(100.0);
  const int radio = b.Radio(10.0);
  b.Hit(0, 0).Path(0, 0, {w}, radio);
  const Instance instance = b.Build();
  const Subgradient z = Subgradients(Solutions(instance, 1, {2.0}), instance);
  EXPECT_DOUBLE_EQ(z.lambda[0], 0.0);
}

TEST(SubgradientsTest, IdleComputeGivesFullSlack) {
  const Instance instance = TwoLevelCell();
  const Subgradient z =
      Subgradients(Solutions(instance, 0, {0.0, 2.0}, /*y=*/1), instance);
  EXPECT_DOUBLE_EQ(z.lambda[0], -8.0);
  EXPECT_DOUBLE_EQ(z.mu[0], 0.0);
  EXPECT_DOUBLE_EQ(z.MuNorm(), 0.0);
  EXPECT_DOUBLE_EQ(z.LambdaNorm(), 8.0);
}

DualState UnitState(double mu, double lambda, StepSchedule schedule) {
  DualState state;
  state.mu = {mu};
  state.lambda = {lambda};
  state.schedule = schedule;
  return state;
}

TEST(UpdateDualsTest, MuMovesAgainstSubgradient) {
  const DualState next =
      UpdateDuals(UnitState(1.0, 0.0, {1.0, 10.0}), {{-3.0}, {0.0}});
  EXPECT_NEAR(next.mu[0], 1.3, 1e-15);
  EXPECT_EQ(next.iteration, 1);
}

TEST(UpdateDualsTest, LambdaProjectsOntoNonnegatives) {
  // Step 10 / (10 + 0) = 1.
  const DualState down =
      UpdateDuals(UnitState(0.0, 0.1, {10.0, 10.0}), {{0.0}, {-0.5}});
  EXPECT_EQ(down.lambda[0], 0.0);
  const DualState up =
      UpdateDuals(UnitState(0.0, 0.1, {10.0, 10.0}), {{0.0}, {0.5}});
  EXPECT_NEAR(up.lambda[0], 0.6, 1e-15);
}

TEST(UpdateDualsTest, ZeroSubgradientOnlyAdvancesClock) {
  const DualState start = UnitState(0.7, 0.2, {1.0, 10.0});
  const DualState next = UpdateDuals(start, {{0.0}, {0.0}});
  EXPECT_EQ(next.mu, start.mu);
  EXPECT_EQ(next.lambda, start.lambda);
  EXPECT_EQ(next.iteration, start.iteration + 1);
}

TEST(UpdateDualsTest, StepsScaleWithTopRate) {
  const Instance instance = TwoLevelCell();
  const DualState state = DualState::Initial(instance, {});
  EXPECT_DOUBLE_EQ(state.mu_scale, 1.0 / 8.0);
  EXPECT_DOUBLE_EQ(state.lambda_scale, 1.0 / 8.0);
}

TEST(RecoverPrimalTest, FeasibleInputIsKept) {
  const Instance instance = TwoLevelCell();
  const SubproblemSolutions s = Solutions(instance, 1, {8.0, 0.0});
  const PrimalSolution p = RecoverPrimal(s, instance);
  EXPECT_TRUE(p.feasible);
  EXPECT_EQ(p.x, s.x);
  EXPECT_EQ(p.y, s.y);
  EXPECT_EQ(p.rates, s.rates);
}

TEST(RecoverPrimalTest, StepsDownToWhatTheLinkCarries) {
  const Instance instance = OneCellInstance(3.0, /*hit=*/true, /*origin_path=*/true);
  const PrimalSolution p = RecoverPrimal(Solutions(instance, 1, {0.0, 0.0}), instance);
  EXPECT_TRUE(p.feasible);
  EXPECT_EQ(p.x.Level(0), 0);
  EXPECT_DOUBLE_EQ(p.utility, 1.0);
}

TEST(RecoverPrimalTest, UnservableUserIsReported) {
  const Instance instance = OneCellInstance(1.0, /*hit=*/false, /*origin_path=*/true);
  const PrimalSolution p = RecoverPrimal(Solutions(instance, 1, {0.0, 0.0}), instance);
  EXPECT_FALSE(p.feasible);
  EXPECT_EQ(p.unservable_users, std::vector<int>{0});
}

TEST(EvaluatePrimalTest, AgreesWithIndependentChecker) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Instance instance = BuildInstance(SmallInstanceConfig(seed));
    const RunResult run = mecc::Run(instance);
    ASSERT_TRUE(run.has_primal);
    EXPECT_TRUE(EvaluatePrimal(run.best, instance).ok());
    EXPECT_TRUE(CheckFeasible(run.best, instance).ok());
  }
}

TEST(RunTest, SmallInstancesCloseToOptimum) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Instance instance = BuildInstance(SmallInstanceConfig(seed));
    const ExactResult exact = SolveExact(instance);
    const RunResult run = mecc::Run(instance);
    ASSERT_TRUE(run.has_primal);
    EXPECT_GE(run.best.utility, 0.95 * exact.optimum) << "seed " << seed;
    EXPECT_GE(run.best_dual, exact.optimum - 1e-6) << "seed " << seed;
    EXPECT_LE(run.best.utility, exact.optimum + 1e-12) << "seed " << seed;
  }
}

TEST(RunTest, AmpleCapacityConvergesAtOnce) {
  InstanceBuilder b({1.0, 2.0, 4.0}, {1.0, 2.0, 3.0}, 3, 1);
  const int w = b.Wired(1000.0);
  const int radio = b.Radio(10.0);
  for (int i = 0; i < 3; ++i) b.Hit(i, 0).Path(i, 0, {w}, radio);
  const Instance instance = b.Build();
  const RunResult run = mecc::Run(instance);
  EXPECT_EQ(run.iterations, 1);
  EXPECT_TRUE(run.converged);
  EXPECT_EQ(run.gap, 0.0);
  EXPECT_DOUBLE_EQ(run.best.utility, 3.0);
}

TEST(RunTest, SameInputSameTrace) {
  const Instance instance = BuildInstance(SmallInstanceConfig(8));
  std::ostringstream first;
  std::ostringstream second;
  mecc::Run(instance).trace.WriteCsv(first);
  mecc::Run(instance).trace.WriteCsv(second);
  EXPECT_EQ(first.str(), second.str());
}

TEST(RunTest, BoundSequencesAreMonotone) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance instance = BuildInstance(SmallInstanceConfig(seed));
    RunOptions options;
    options.max_iters = 300;
    const RunResult run = mecc::Run(instance, options);
    for (std::size_t t = 1; t < run.trace.rows.size(); ++t) {
      EXPECT_LE(run.trace.rows[t].best_dual, run.trace.rows[t - 1].best_dual);
      EXPECT_GE(run.trace.rows[t].best_primal,
                run.trace.rows[t - 1].best_primal);
    }
  }
}

TEST(RunTest, PricesStayNonnegative) {
  const Instance instance = BuildInstance(SmallInstanceConfig(12));
  DualState state = DualState::Initial(instance, {});
  for (int t = 0; t < 200; ++t) {
    const SubproblemSolutions s = DualValue(state, instance);
    state = UpdateDuals(std::move(state), Subgradients(s, instance));
    for (double l : state.lambda) ASSERT_GE(l, 0.0);
  }
}

TEST(RunTest, DistributedModeFindsFeasiblePoint) {
  const Instance instance = BuildInstance(SmallInstanceConfig(2));
  RunOptions options;
  options.mode = RateMode::kDistributed;
  options.max_iters = 100;
  const RunResult run = mecc::Run(instance, options);
  EXPECT_TRUE(run.error.empty()) << run.error;
  ASSERT_TRUE(run.has_primal);
  EXPECT_TRUE(CheckFeasible(run.best, instance).ok());
}

TEST(RunTest, EnlargedCachesDoNotHurt) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    InstanceConfig base = SmallInstanceConfig(seed);
    InstanceConfig larger = base;
    larger.content.mbs_cache_files += 3;
    larger.content.sbs_compute_mbps += 4.0;
    const RunOptions options;
    const RunResult a = mecc::Run(BuildInstance(base), options);
    const RunResult b = mecc::Run(BuildInstance(larger), options);
    ASSERT_TRUE(a.has_primal && b.has_primal);
    EXPECT_GE(b.best.utility, a.best.utility - options.tol) << "seed " << seed;
  }
}

TEST(DualTraceTest, CsvLayout) {
  DualTrace trace;
  trace.rows.push_back({1, 2.5, 2.5, 2.0, 0.2, 3.0, 0.0});
  std::ostringstream out;
  trace.WriteCsv(out);
  EXPECT_EQ(out.str(),
            "iteration,dual,best_dual,best_primal,gap,z_mu_norm,z_lambda_norm\n"
            "1,2.5,2.5,2,0.2,3,0\n");
}

TEST(RelativeGapTest, NormalizesByDual) {
  EXPECT_DOUBLE_EQ(RelativeGap(4.0, 3.0), 0.25);
  EXPECT_DOUBLE_EQ(RelativeGap(0.5, 0.25), 0.25);
  EXPECT_TRUE(std::isinf(RelativeGap(1.0, -std::numeric_limits<double>::infinity())));
}

TEST(RateModeTest, ParsesNames) {
  EXPECT_EQ(ParseRateMode("centralized"), RateMode::kCentralized);
  EXPECT_EQ(ParseRateMode("distributed"), RateMode::kDistributed);
  EXPECT_THROW(ParseRateMode("other"), std::invalid_argument);
}

}  // namespace
}  // namespace mecc
