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

// Video library, quality ladder, Zipf popularity, LFU cache placement, cache
// hit bookkeeping and the transcoding compute model.

#ifndef MECC_CONTENT_H_
#define MECC_CONTENT_H_

#include <cstdint>
#include <span>
#include <vector>

namespace mecc {

struct QualityLevel {
  int q = 1;               // 1-based level
  double rate_bps = 0.0;   // minimum playback rate v_q
  double score = 0.0;      // quality measure s_q
};

// Levels ordered by q = 1..Q; rates and scores strictly increasing.
struct QualityLadder {
  std::vector<QualityLevel> levels;

  int size() const { return static_cast<int>(levels.size()); }
  const QualityLevel& top() const { return levels.back(); }
  // Throws std::invalid_argument on an empty or non-monotone ladder.
  void Validate() const;
};

// Six CBR levels: 1, 2.5, 5, 8, 16 and 35 Mbps.
QualityLadder DefaultLadder();

struct VideoLibrary {
  int file_count = 1000;
  double zipf_exponent = 0.56;
  QualityLadder ladder = DefaultLadder();
  double duration_s = 600.0;
};

// p(f) = f^-s / sum_{f'} f'^-s for f = 1..file_count (index f-1).
std::vector<double> ZipfPmf(int file_count, double exponent);

// LFU placement under a static popularity ranking: files 1..min(capacity, n).
std::vector<int> LfuPlace(const VideoLibrary& library, int capacity);

// Probability that a request hits a cache holding the `capacity` most
// popular files.
double AnalyticHitRate(const VideoLibrary& library, int capacity);

// One i.i.d. draw per user from `pmf`; file ids are 1-based.
std::vector<int> SampleRequests(std::span<const double> pmf, int user_count,
                                std::uint64_t seed);

enum class HitStatus : std::uint8_t { kMiss, kHit };

// Cached files of one content source. Edge caches always hold the highest
// quality; the origin holds the full library.
struct NodeCache {
  int node = 0;
  int capacity = 0;
  bool is_origin = false;
  std::vector<int> files;  // sorted

  bool Holds(int file) const;
};

struct CacheState {
  std::vector<NodeCache> nodes;
};

// Hit status per (user, cache column). A hit lets the node serve the full
// cached rate (the top level); a miss means the node contributes nothing.
class HitMatrix {
 public:
  HitMatrix() = default;
  HitMatrix(int users, int nodes, std::vector<double> level_rates);

  int users() const { return users_; }
  int nodes() const { return nodes_; }
  HitStatus status(int user, int node) const {
    return status_[user * nodes_ + node];
  }
  bool hit(int user, int node) const {
    return status(user, node) == HitStatus::kHit;
  }
  void set(int user, int node, HitStatus s) { status_[user * nodes_ + node] = s; }
  // v_ij: top-level rate on a hit, 0 on a miss.
  double full_rate(int user, int node) const;
  // v_ij(q): v_q on a hit, 0 on a miss; q is 1-based.
  double deliverable_rate(int user, int node, int q) const;
  std::span<const HitStatus> row(int user) const {
    return {status_.data() + user * nodes_, static_cast<std::size_t>(nodes_)};
  }

 private:
  int users_ = 0;
  int nodes_ = 0;
  std::vector<double> level_rates_;
  std::vector<HitStatus> status_;
};

HitMatrix BuildHitMatrix(std::span<const int> requests, const CacheState& caches,
                         const QualityLadder& ladder);

// Transcoding budgets per cache column (bits/s) and per-flow cost c_i.
// The origin column is exempt from the budget.
struct ComputeModel {
  std::vector<double> capacity_bps;
  std::vector<double> task_cost_bps;
};

}  // namespace mecc

#endif  // MECC_CONTENT_H_
