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

// A problem instance as the solvers see it: quality ladder, hit matrix,
// compute budgets, link capacities and candidate paths. Rates are in Mbps
// and spectrum in MHz so that prices stay well conditioned; configuration
// and output files use bits/s.

#ifndef MECC_INSTANCE_H_
#define MECC_INSTANCE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "mecc/content.h"
#include "mecc/scenario.h"

namespace mecc {

struct ContentConfig {
  VideoLibrary library;
  int gw_cache_files = 0;
  int mbs_cache_files = 200;
  int sbs_cache_files = 100;
  double gw_compute_mbps = 0.0;
  double mbs_compute_mbps = 150.0;
  double sbs_compute_mbps = 50.0;
  double task_cost_mbps = 25.0;
};

struct InstanceConfig {
  ScenarioConfig scenario;
  ContentConfig content;
  // 1-based ladder level treated as 1080p; levels at or above it count as HD.
  int hd_level = 5;
};

enum class Baseline { kFullMecc, kCacheOnly, kNoMecc };

const char* ToString(Baseline baseline);
Baseline ParseBaseline(const std::string& name);

// cache-only: every compute budget is zero, so edge caches serve the cached
// top level only. no-mecc: edge caches are empty as well (origin only).
InstanceConfig ApplyBaseline(InstanceConfig config, Baseline baseline);

// Independent stream seeds derived from one experiment seed.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream);

struct RoutedPath {
  int user = 0;      // user index i
  int source = 0;    // cache column j; Instance::origin() is the origin
  int k = 0;
  std::vector<int> wired;  // indices into Instance::wired_capacity
  int wireless = 0;        // index into Instance::efficiency
};

struct Instance {
  std::vector<double> level_rate;  // v_q, Mbps
  std::vector<double> level_score;  // s_q
  int num_users = 0;
  int num_nodes = 0;  // edge nodes j = 0..num_nodes-1; column num_nodes = origin
  HitMatrix hits;     // num_users x (num_nodes + 1), rates in Mbps
  std::vector<double> compute_capacity;  // C_j, Mbps, per edge node
  std::vector<double> task_cost;         // c_i, Mbps, per user
  std::vector<double> wired_capacity;    // B_l, Mbps
  std::vector<double> efficiency;        // gamma_l, bits/s/Hz
  double bandwidth = 0.0;                // W, MHz
  std::vector<RoutedPath> paths;

  // Provenance; empty for hand-built instances.
  Topology topology;
  std::vector<int> user_nodes;
  std::vector<int> edge_nodes;
  std::vector<NodeKind> edge_kinds;
  std::vector<int> requests;
  std::vector<int> wired_link_ids;
  std::vector<int> wireless_link_ids;

  int levels() const { return static_cast<int>(level_rate.size()); }
  double top_rate() const { return level_rate.back(); }
  int origin() const { return num_nodes; }
  bool Hit(int user, int node) const { return hits.hit(user, node); }
  double FullRate(int user, int node) const {
    return hits.full_rate(user, node);
  }

  // Validates shapes and builds the per-user and per-(user, node) path
  // indices. Must be called after any edit to `paths`.
  void Finalize();
  const std::vector<int>& PathsOfUser(int user) const {
    return paths_of_user_[user];
  }
  const std::vector<int>& PathsOfPair(int user, int node) const {
    return paths_of_pair_[user * (num_nodes + 1) + node];
  }

 private:
  std::vector<std::vector<int>> paths_of_user_;
  std::vector<std::vector<int>> paths_of_pair_;
};

// Builds topology, requests, caches and paths from `config` with its seed.
Instance BuildInstance(const InstanceConfig& config);

// Hand-built instance helper: ladder in Mbps, no edge nodes or paths yet.
Instance MakeEmptyInstance(std::vector<double> rates_mbps,
                           std::vector<double> scores, int users, int nodes);

}  // namespace mecc

#endif  // MECC_INSTANCE_H_
