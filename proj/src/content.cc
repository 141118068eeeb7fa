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

#include "mecc/content.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace mecc {

void QualityLadder::Validate() const {
  if (levels.empty()) throw std::invalid_argument("quality ladder is empty");
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (levels[k].q != static_cast<int>(k) + 1) {
      throw std::invalid_argument("quality levels must be numbered 1..Q");
    }
    if (!(levels[k].rate_bps > 0.0)) {
      throw std::invalid_argument("quality rates must be positive");
    }
    if (k > 0 && (levels[k].rate_bps <= levels[k - 1].rate_bps ||
                  levels[k].score <= levels[k - 1].score)) {
      throw std::invalid_argument(
          "quality rates and scores must be strictly increasing");
    }
  }
}

QualityLadder DefaultLadder() {
  QualityLadder ladder;
  const double rates_mbps[] = {1.0, 2.5, 5.0, 8.0, 16.0, 35.0};
  const double scores[] = {1.5, 2.4, 3.2, 3.8, 4.3, 4.6};
  for (int k = 0; k < 6; ++k) {
    ladder.levels.push_back({k + 1, rates_mbps[k] * 1e6, scores[k]});
  }
  return ladder;
}

std::vector<double> ZipfPmf(int file_count, double exponent) {
  if (file_count < 1) throw std::invalid_argument("file_count must be >= 1");
  if (!(exponent >= 0.0)) throw std::invalid_argument("exponent must be >= 0");
  std::vector<double> pmf(file_count);
  for (int f = 0; f < file_count; ++f) {
    pmf[f] = std::pow(static_cast<double>(f + 1), -exponent);
  }
  // Sum smallest terms first.
  const double total = std::accumulate(pmf.rbegin(), pmf.rend(), 0.0);
  for (double& p : pmf) p /= total;
  return pmf;
}

std::vector<int> LfuPlace(const VideoLibrary& library, int capacity) {
  if (capacity < 0) throw std::invalid_argument("cache capacity must be >= 0");
  std::vector<int> files(std::min(capacity, library.file_count));
  std::iota(files.begin(), files.end(), 1);
  return files;
}

double AnalyticHitRate(const VideoLibrary& library, int capacity) {
  if (capacity < 0) throw std::invalid_argument("cache capacity must be >= 0");
  const std::vector<double> pmf =
      ZipfPmf(library.file_count, library.zipf_exponent);
  const int cached = std::min(capacity, library.file_count);
  if (cached == library.file_count) return 1.0;
  double hit = 0.0;
  for (int f = cached - 1; f >= 0; --f) hit += pmf[f];
  return hit;
}

std::vector<int> SampleRequests(std::span<const double> pmf, int user_count,
                                std::uint64_t seed) {
  if (pmf.empty()) throw std::invalid_argument("pmf is empty");
  for (double p : pmf) {
    if (!(p >= 0.0)) throw std::invalid_argument("pmf has a negative entry");
  }
  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> draw(pmf.begin(), pmf.end());
  std::vector<int> requests(user_count);
  for (int& r : requests) r = draw(rng) + 1;
  return requests;
}

bool NodeCache::Holds(int file) const {
  return is_origin || std::binary_search(files.begin(), files.end(), file);
}

HitMatrix::HitMatrix(int users, int nodes, std::vector<double> level_rates)
    : users_(users),
      nodes_(nodes),
      level_rates_(std::move(level_rates)),
      status_(static_cast<std::size_t>(users) * nodes, HitStatus::kMiss) {}

double HitMatrix::full_rate(int user, int node) const {
  return hit(user, node) ? level_rates_.back() : 0.0;
}

double HitMatrix::deliverable_rate(int user, int node, int q) const {
  return hit(user, node) ? level_rates_.at(q - 1) : 0.0;
}

HitMatrix BuildHitMatrix(std::span<const int> requests, const CacheState& caches,
                         const QualityLadder& ladder) {
  std::vector<double> rates;
  for (const QualityLevel& level : ladder.levels) rates.push_back(level.rate_bps);
  HitMatrix hits(static_cast<int>(requests.size()),
                 static_cast<int>(caches.nodes.size()), std::move(rates));
  for (std::size_t i = 0; i < requests.size(); ++i) {
    for (std::size_t j = 0; j < caches.nodes.size(); ++j) {
      if (caches.nodes[j].Holds(requests[i])) {
        hits.set(static_cast<int>(i), static_cast<int>(j), HitStatus::kHit);
      }
    }
  }
  return hits;
}

}  // namespace mecc
