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

// Experiment plumbing: JSON configs, seeded sweeps over baselines, and
// metrics emission. External rates in JSON are bits/s unless the key says
// otherwise (`*_mbps`).

#ifndef MECC_HARNESS_H_
#define MECC_HARNESS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "mecc/dual_solver.h"
#include "mecc/instance.h"

namespace mecc {

using Json = nlohmann::ordered_json;

// Scenario document. Missing keys keep their defaults; unknown keys are
// rejected with std::invalid_argument.
InstanceConfig ConfigFromJson(const Json& doc);
Json ConfigToJson(const InstanceConfig& config);

Json TopologyToJson(const Topology& topology);

// A desk-size random configuration: one gateway, one macro and one small
// cell, 1 to 4 users, a three-level ladder and a ten-file library, with
// tight random capacities so that every constraint family can bind.
InstanceConfig SmallInstanceConfig(std::uint64_t seed);

enum class SweepAxis { kNone, kComputeCapacity, kCacheSize, kUsers };

const char* ToString(SweepAxis axis);
SweepAxis ParseSweepAxis(const std::string& name);

// compute_capacity: value is the macro budget in Mbps; small cells get the
//   value scaled by the configured small/macro ratio.
// cache_size: value is the macro cache in files; small cells hold half.
// users: value is the number of active users.
InstanceConfig ApplyAxis(InstanceConfig config, SweepAxis axis, double value);

struct ExperimentSpec {
  InstanceConfig config;
  SweepAxis axis = SweepAxis::kNone;
  std::vector<double> values;  // ignored for kNone
  int repetitions = 1;
  // One scenario seed per repetition; empty means config seed + repetition.
  std::vector<std::uint64_t> seeds;
  std::vector<Baseline> baselines = {Baseline::kFullMecc};
  RunOptions solver;
  int threads = 1;
  // Wall time is nondeterministic, so it is only measured on request.
  bool record_wall_time = false;

  // Throws std::invalid_argument.
  void Validate() const;
  int points() const;
  std::uint64_t SeedOf(int repetition) const;
};

ExperimentSpec ExperimentFromJson(const Json& doc);
Json ExperimentToJson(const ExperimentSpec& spec);

struct MetricsRecord {
  int point = 0;
  SweepAxis axis = SweepAxis::kNone;
  double axis_value = 0.0;
  int repetition = 0;
  std::uint64_t seed = 0;
  Baseline baseline = Baseline::kFullMecc;
  int users = 0;
  int served_users = 0;  // users counted in level_counts
  double mean_utility = 0.0;
  std::vector<int> level_counts;  // index q-1
  double hd_plus_ratio = 0.0;
  // Share of users whose requested file is cached at a node of the class;
  // 0 when the class has no nodes.
  double hit_rate_gw = 0.0;
  double hit_rate_mbs = 0.0;
  double hit_rate_sbs = 0.0;
  int iterations = 0;
  double gap = 0.0;
  bool converged = false;
  bool feasible = false;
  std::string error;
  bool timed = false;
  double wall_time_s = 0.0;

  bool failed() const { return !feasible || !error.empty(); }
};

// Solves one configuration and summarizes it.
MetricsRecord Measure(const InstanceConfig& config, const RunOptions& solver,
                      int hd_level);

// Records ordered by (point, repetition, baseline order in the spec),
// independent of thread scheduling.
std::vector<MetricsRecord> RunExperiment(const ExperimentSpec& spec);

enum class EmitFormat { kCsv, kJson };

EmitFormat ParseEmitFormat(const std::string& name);

// point,axis,axis_value,repetition,seed,baseline,users,served_users,
// mean_utility,hd_plus_ratio,count_q1..count_qQ,hit_rate_gw,hit_rate_mbs,
// hit_rate_sbs,iterations,gap,converged,feasible,error, plus wall_time_s
// when any record is timed.
std::string MetricsCsv(const std::vector<MetricsRecord>& records);
// {"schema": "mecc.metrics/1", "records": [...]}
std::string MetricsJson(const std::vector<MetricsRecord>& records);

// Throws std::invalid_argument on an empty record list (before touching the
// file system) and std::runtime_error on I/O failure.
void Emit(const std::vector<MetricsRecord>& records, EmitFormat format,
          const std::string& path);

}  // namespace mecc

#endif  // MECC_HARNESS_H_
