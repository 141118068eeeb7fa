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

#include <stdexcept>

#include <gtest/gtest.h>

#include "mecc/harness.h"
#include "testing/fixtures.h"

namespace mecc {
namespace {

using testing::InstanceBuilder;
using testing::OneCellInstance;

bool OnlyWiredFails(const FeasibilityReport& r) {
  return r.domain && r.one_level && r.compute && !r.wired && r.wireless &&
         r.demand && r.gating;
}

TEST(SolveExactTest, NarrowLinkForcesLowLevel) {
  const Instance instance = OneCellInstance(6.0);
  const ExactResult exact = SolveExact(instance);
  ASSERT_TRUE(exact.feasible);
  EXPECT_EQ(exact.solution.x.Level(0), 0);
  EXPECT_DOUBLE_EQ(exact.optimum, 1.0);
  EXPECT_EQ(exact.solution.y.at(0, 0), 1);
}

TEST(SolveExactTest, WideLinkReachesTop) {
  const Instance instance = OneCellInstance(8.0);
  const ExactResult exact = SolveExact(instance);
  ASSERT_TRUE(exact.feasible);
  EXPECT_EQ(exact.solution.x.Level(0), 1);
  EXPECT_DOUBLE_EQ(exact.optimum, 2.0);
}

TEST(SolveExactTest, NoSourceIsInfeasible) {
  const Instance instance = OneCellInstance(10.0, /*hit=*/false);
  EXPECT_FALSE(SolveExact(instance).feasible);
}

TEST(SolveExactTest, RefusesOversizedInstances) {
  InstanceBuilder b({1.0, 2.0}, {1.0, 2.0}, 6, 1);
  const int w = b.Wired(10.0);
  const int radio = b.Radio(1.0);
  for (int i = 0; i < 6; ++i) b.Path(i, 1, {w}, radio);
  const Instance instance = b.Build();
  EXPECT_THROW(SolveExact(instance), std::length_error);
  InstanceBound bound;
  bound.max_users = 6;
  EXPECT_NO_THROW(SolveExact(instance, bound));
  bound.max_enumeration = 10.0;
  EXPECT_THROW(SolveExact(instance, bound), std::length_error);
}

TEST(SolveExactTest, TiesResolveToSmallestLevelVector) {
  // Two users share a link that carries one top stream and one low stream;
  // (low, top) and (top, low) score the same.
  InstanceBuilder b({2.0, 8.0}, {1.0, 2.0}, 2, 1);
  const int w = b.Wired(10.0);
  const int radio = b.Radio(10.0);
  b.Path(0, 1, {w}, radio).Path(1, 1, {w}, radio);
  const ExactResult exact = SolveExact(b.Build());
  ASSERT_TRUE(exact.feasible);
  EXPECT_EQ(exact.solution.x.Level(0), 0);
  EXPECT_EQ(exact.solution.x.Level(1), 1);
}

TEST(SolveExactTest, OutputPassesChecker) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Instance instance = BuildInstance(SmallInstanceConfig(seed));
    const ExactResult exact = SolveExact(instance);
    ASSERT_TRUE(exact.feasible) << "seed " << seed;
    const FeasibilityReport report = CheckFeasible(exact.solution, instance);
    EXPECT_TRUE(report.ok()) << "seed " << seed;
    EXPECT_TRUE(exact.solution.feasible);
  }
}

// Reversing the user order permutes paths, hits and costs; the optimum must
// not move.
TEST(SolveExactTest, InvariantUnderUserRelabeling) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Instance instance = BuildInstance(SmallInstanceConfig(seed));
    Instance flipped = instance;
    const int n = instance.num_users;
    for (RoutedPath& path : flipped.paths) path.user = n - 1 - path.user;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= instance.num_nodes; ++j) {
        flipped.hits.set(n - 1 - i, j, instance.hits.status(i, j));
      }
      flipped.task_cost[n - 1 - i] = instance.task_cost[i];
    }
    flipped.Finalize();
    EXPECT_DOUBLE_EQ(SolveExact(flipped).optimum, SolveExact(instance).optimum)
        << "seed " << seed;
  }
}

TEST(SolveExactTest, MoreCacheOrComputeNeverHurts) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const InstanceConfig base = SmallInstanceConfig(seed);
    const double before = SolveExact(BuildInstance(base)).optimum;
    InstanceConfig cache = base;
    cache.content.mbs_cache_files += 2;
    cache.content.sbs_cache_files += 2;
    EXPECT_GE(SolveExact(BuildInstance(cache)).optimum, before) << seed;
    InstanceConfig compute = base;
    compute.content.mbs_compute_mbps += 2.0;
    compute.content.sbs_compute_mbps += 2.0;
    EXPECT_GE(SolveExact(BuildInstance(compute)).optimum, before) << seed;
  }
}

TEST(CheckFeasibleTest, ZeroRatesFailDemand) {
  const Instance instance = OneCellInstance(8.0);
  PrimalSolution s = SolveExact(instance).solution;
  for (double& r : s.rates) r = 0.0;
  const FeasibilityReport report = CheckFeasible(s, instance);
  EXPECT_FALSE(report.demand);
  EXPECT_TRUE(report.wired && report.gating && report.compute);
}

TEST(CheckFeasibleTest, OneBpsOverWiredCapacity) {
  Instance instance = OneCellInstance(8.0);
  const PrimalSolution s = SolveExact(instance).solution;
  ASSERT_TRUE(CheckFeasible(s, instance).ok());
  // Tolerance is 1e-9 relative on 8 Mbps; shave that plus 1 bps.
  instance.wired_capacity[0] = 8.0 - 8e-9 - 1e-6;
  EXPECT_TRUE(OnlyWiredFails(CheckFeasible(s, instance)));
  instance.wired_capacity[0] = 8.0 - 4e-9;
  EXPECT_TRUE(CheckFeasible(s, instance).ok());
}

TEST(CheckFeasibleTest, FlagsEachFamily) {
  const Instance instance = OneCellInstance(6.0);
  const PrimalSolution good = SolveExact(instance).solution;
  ASSERT_TRUE(CheckFeasible(good, instance).ok());

  PrimalSolution two_levels = good;
  two_levels.x.set(0, 1, 1);
  EXPECT_FALSE(CheckFeasible(two_levels, instance).one_level);

  PrimalSolution no_compute = good;
  no_compute.y.set(0, 0, 0);
  EXPECT_FALSE(CheckFeasible(no_compute, instance).gating);

  Instance tight = instance;
  tight.compute_capacity[0] = 4.0;
  EXPECT_FALSE(CheckFeasible(good, tight).compute);

  Instance narrow = instance;
  narrow.bandwidth = 0.1;
  EXPECT_FALSE(CheckFeasible(good, narrow).wireless);

  PrimalSolution negative = good;
  negative.rates[0] = -1.0;
  EXPECT_FALSE(CheckFeasible(negative, instance).domain);

  Instance miss = instance;
  miss.hits.set(0, 0, HitStatus::kMiss);
  const FeasibilityReport on_miss = CheckFeasible(good, miss);
  EXPECT_FALSE(on_miss.compute);
  EXPECT_FALSE(on_miss.gating);
}

TEST(CheckFeasibleTest, ShapeMismatchIsDomainFailure) {
  const Instance instance = OneCellInstance(6.0);
  PrimalSolution s = SolveExact(instance).solution;
  s.rates.push_back(0.0);
  EXPECT_FALSE(CheckFeasible(s, instance).domain);
}

}  // namespace
}  // namespace mecc
