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

#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "testing/fixtures.h"
#include "testing/oracles.h"

namespace mecc {
namespace {

using testing::InstanceBuilder;

const std::vector<double> kScores{1.0, 2.0};
const std::vector<double> kRates{1.0, 4.0};  // Mbps

TEST(SelectQualityTest, UnpricedPicksTop) {
  const std::vector<double> scores{1.5, 2.4, 3.2, 3.8, 4.3, 4.6};
  const std::vector<double> rates{1, 2.5, 5, 8, 16, 35};
  EXPECT_EQ(SelectQuality(scores, rates, 0.0, 0.0).level, 5);
}

TEST(SelectQualityTest, ModerateRatePriceKeepsTop) {
  const QualityPick pick = SelectQuality(kScores, kRates, 0.4, 0.5);
  EXPECT_EQ(pick.level, 1);
  EXPECT_NEAR(pick.value, 0.9, 1e-12);
}

TEST(SelectQualityTest, HighRatePriceDropsToBottom) {
  const QualityPick pick = SelectQuality(kScores, kRates, 1.0, 0.5);
  EXPECT_EQ(pick.level, 0);
  EXPECT_NEAR(pick.value, 0.0, 1e-12);
}

TEST(SelectQualityTest, TiesGoToLowerLevel) {
  // 1 - 1 * 1 = 0 and 2 - 1 * 2 = 0.
  const std::vector<double> rates{1.0, 2.0};
  EXPECT_EQ(SelectQuality(kScores, rates, 1.0, 0.0).level, 0);
}

TEST(SelectQualityTest, BonusCountsOnlyHitNodes) {
  const std::vector<double> lambda{0.25, 0.25, 9.0};
  const std::vector<HitStatus> hits{HitStatus::kHit, HitStatus::kMiss,
                                    HitStatus::kMiss};
  // Bonus 0.25 * 2 = 0.5 from node 0 only.
  const QualityPick pick = SelectQuality(kScores, kRates, 0.4, lambda, hits, 2.0);
  EXPECT_EQ(pick.level, 1);
  EXPECT_NEAR(pick.value, 0.9, 1e-12);
}

TEST(SelectQualityTest, RejectsInconsistentLadder) {
  const std::vector<double> rates{1.0};
  EXPECT_THROW(SelectQuality(kScores, rates, 0.0, 0.0), std::invalid_argument);
}

std::vector<HitStatus> AllHit(std::size_t n) {
  return std::vector<HitStatus>(n, HitStatus::kHit);
}

TEST(AssignComputeTest, ZeroGainsSelectNothing) {
  const std::vector<double> gains(4, 0.0);
  const std::vector<double> costs(4, 25.0);
  const KnapsackResult r = AssignCompute(gains, costs, AllHit(4), 150.0);
  EXPECT_EQ(r.selected, std::vector<std::uint8_t>(4, 0));
  EXPECT_TRUE(r.candidates.empty());
  EXPECT_EQ(r.value, 0.0);
}

TEST(AssignComputeTest, SixLargestOfEight) {
  const std::vector<double> gains{3, 8, 1, 7, 5, 2, 6, 4};
  const std::vector<double> costs(8, 25.0);
  const KnapsackResult r = AssignCompute(gains, costs, AllHit(8), 150.0);
  EXPECT_EQ(r.selected, (std::vector<std::uint8_t>{1, 1, 0, 1, 1, 0, 1, 1}));
  EXPECT_DOUBLE_EQ(r.value, 33.0);
}

TEST(AssignComputeTest, TwoSmallBeatOneLarge) {
  const std::vector<double> gains{3.0, 2.0, 4.9};
  const std::vector<double> costs{25.0, 25.0, 50.0};
  const KnapsackResult r = AssignCompute(gains, costs, AllHit(3), 50.0);
  EXPECT_EQ(r.selected, (std::vector<std::uint8_t>{1, 1, 0}));
  EXPECT_DOUBLE_EQ(r.value, 5.0);
}

TEST(AssignComputeTest, MissesAreNeverSelected) {
  const std::vector<double> gains{5.0, 1.0};
  const std::vector<double> costs{1.0, 1.0};
  const std::vector<HitStatus> hits{HitStatus::kMiss, HitStatus::kHit};
  const KnapsackResult r = AssignCompute(gains, costs, hits, 10.0);
  EXPECT_EQ(r.selected, (std::vector<std::uint8_t>{0, 1}));
  EXPECT_EQ(r.candidates, std::vector<int>{1});
}

TEST(AssignComputeTest, RejectsBadInput) {
  const std::vector<double> one{1.0};
  const std::vector<double> two{1.0, 1.0};
  EXPECT_THROW(AssignCompute(one, two, AllHit(2), 1.0), std::invalid_argument);
  EXPECT_THROW(AssignCompute(one, one, AllHit(1), -1.0), std::invalid_argument);
}

// Random mixed instances against exhaustive subset enumeration; costs sit
// on the 1 kbps grid so the comparison is exact.
TEST(AssignComputeTest, MatchesExhaustiveEnumeration) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> size(1, 15);
  std::uniform_int_distribution<int> cost_kbps(1, 60000);
  std::uniform_real_distribution<double> gain(-1.0, 10.0);
  std::bernoulli_distribution hit(0.85);
  std::uniform_real_distribution<double> fill(0.1, 0.9);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(rng);
    std::vector<double> gains(n), costs(n);
    std::vector<HitStatus> hits(n);
    std::vector<bool> available(n);
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
      gains[k] = gain(rng);
      costs[k] = cost_kbps(rng) / 1000.0;
      hits[k] = hit(rng) ? HitStatus::kHit : HitStatus::kMiss;
      available[k] = hits[k] == HitStatus::kHit;
      total += costs[k];
    }
    const double capacity = std::floor(total * fill(rng) * 1000.0) / 1000.0;
    const KnapsackResult r = AssignCompute(gains, costs, hits, capacity);
    const double expected =
        testing::ExhaustiveKnapsack(gains, costs, available, capacity);
    EXPECT_NEAR(r.value, expected, 1e-9) << "trial " << trial;
    double used = 0.0;
    double value = 0.0;
    for (int k = 0; k < n; ++k) {
      if (!r.selected[k]) continue;
      EXPECT_TRUE(available[k]);
      used += costs[k];
      value += gains[k];
    }
    EXPECT_LE(used, capacity + 1e-9);
    EXPECT_NEAR(value, r.value, 1e-9);
  }
}

TEST(SolveRatesCentralizedTest, NonpositiveCoefficientsGiveZero) {
  InstanceBuilder b({1.0, 10.0}, {1.0, 2.0}, 1, 1);
  const int w = b.Wired(10.0);
  const int radio = b.Radio(2.0);
  b.Path(0, 1, {w}, radio);
  const Instance instance = b.Build();
  const std::vector<double> coeffs{-1.0};
  const RateSolution r = SolveRatesCentralized(instance, coeffs);
  EXPECT_EQ(r.rates, std::vector<double>{0.0});
  EXPECT_EQ(r.objective, 0.0);
}

TEST(SolveRatesCentralizedTest, SinglePathTakesTighterBound) {
  InstanceBuilder b({1.0, 10.0}, {1.0, 2.0}, 1, 1);
  const int w = b.Wired(10.0);
  const int radio = b.Radio(2.0);
  b.Bandwidth(4.0).Path(0, 1, {w}, radio);
  const Instance instance = b.Build();
  const std::vector<double> coeffs{1.0};
  const RateSolution r = SolveRatesCentralized(instance, coeffs);
  EXPECT_NEAR(r.rates[0], 8.0, 1e-12);
}

TEST(SolveRatesCentralizedTest, SpectrumGoesToBetterChannel) {
  InstanceBuilder b({1.0, 100.0}, {1.0, 2.0}, 2, 1);
  const int w1 = b.Wired(1000.0);
  const int w2 = b.Wired(1000.0);
  const int good = b.Radio(4.0);
  const int poor = b.Radio(2.0);
  b.Bandwidth(10.0).Path(0, 1, {w1}, good).Path(1, 1, {w2}, poor);
  const Instance instance = b.Build();
  const std::vector<double> coeffs{1.0, 1.0};
  const RateSolution r = SolveRatesCentralized(instance, coeffs);
  EXPECT_NEAR(r.rates[0], 40.0, 1e-9);
  EXPECT_NEAR(r.rates[1], 0.0, 1e-9);
  EXPECT_NEAR(r.objective, 40.0, 1e-9);
}

TEST(SolveRatesCentralizedTest, RatesCappedAtTopLevel) {
  InstanceBuilder b({1.0, 5.0}, {1.0, 2.0}, 1, 1);
  const int w = b.Wired(100.0);
  const int radio = b.Radio(2.0);
  b.Path(0, 1, {w}, radio);
  const Instance instance = b.Build();
  const std::vector<double> coeffs{3.0};
  EXPECT_NEAR(SolveRatesCentralized(instance, coeffs).rates[0], 5.0, 1e-12);
}

TEST(SolveRatesCentralizedTest, RejectsWrongCoefficientCount) {
  InstanceBuilder b({1.0, 5.0}, {1.0, 2.0}, 1, 1);
  const int w = b.Wired(100.0);
  const int radio = b.Radio(2.0);
  b.Path(0, 1, {w}, radio);
  const Instance instance = b.Build();
  const std::vector<double> coeffs{1.0, 2.0};
  EXPECT_THROW(SolveRatesCentralized(instance, coeffs), std::invalid_argument);
}

}  // namespace
}  // namespace mecc
