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

#ifndef MECC_SOLUTION_H_
#define MECC_SOLUTION_H_

#include <cstdint>
#include <string>
#include <vector>

namespace mecc {

struct Instance;

// One-hot quality indicators x_qi, stored users x levels.
class QualityChoice {
 public:
  QualityChoice() = default;
  QualityChoice(int users, int levels)
      : users_(users), levels_(levels),
        x_(static_cast<std::size_t>(users) * levels, 0) {}

  int users() const { return users_; }
  int levels() const { return levels_; }
  std::uint8_t at(int user, int level) const { return x_[user * levels_ + level]; }
  void set(int user, int level, std::uint8_t value) {
    x_[user * levels_ + level] = value;
  }
  // Clears the row and sets `level` (0-based).
  void Select(int user, int level);
  // Selected 0-based level, or -1 if the row is not one-hot.
  int Level(int user) const;
  bool operator==(const QualityChoice&) const = default;
  const std::vector<std::uint8_t>& raw() const { return x_; }

 private:
  int users_ = 0;
  int levels_ = 0;
  std::vector<std::uint8_t> x_;
};

// Binary transcoding assignment y_ij over edge nodes (the origin is exempt).
class ComputeAssignment {
 public:
  ComputeAssignment() = default;
  ComputeAssignment(int users, int nodes)
      : users_(users), nodes_(nodes),
        y_(static_cast<std::size_t>(users) * nodes, 0) {}

  int users() const { return users_; }
  int nodes() const { return nodes_; }
  std::uint8_t at(int user, int node) const { return y_[user * nodes_ + node]; }
  void set(int user, int node, std::uint8_t value) {
    y_[user * nodes_ + node] = value;
  }
  bool operator==(const ComputeAssignment&) const = default;
  const std::vector<std::uint8_t>& raw() const { return y_; }

 private:
  int users_ = 0;
  int nodes_ = 0;
  std::vector<std::uint8_t> y_;
};

// Pass/fail per constraint family of the joint problem.
struct FeasibilityReport {
  bool domain = true;       // binaries are 0/1, rates >= 0 (1b)
  bool one_level = true;    // one quality level per user (1c)
  bool compute = true;      // transcoding budgets and hit rule (1d)
  bool wired = true;        // wired capacities (1e)
  bool wireless = true;     // shared spectrum (1f)
  bool demand = true;       // delivered rate equals chosen rate (1g)
  bool gating = true;       // rate from a node needs top level or compute (1h)
  std::vector<std::string> violations;

  bool ok() const {
    return domain && one_level && compute && wired && wireless && demand &&
           gating;
  }
};

struct PrimalSolution {
  QualityChoice x;
  ComputeAssignment y;
  std::vector<double> rates;  // per path, Mbps
  double utility = 0.0;       // mean quality score
  bool feasible = false;
  std::vector<int> unservable_users;
  FeasibilityReport report;
};

// Mean score U(X). Summed through per-level counts so that it is exactly
// invariant under user relabeling. Rows that are not one-hot contribute 0.
double MeanUtility(const QualityChoice& x, const std::vector<double>& scores);

// Per-level selection counts.
std::vector<int> LevelCounts(const QualityChoice& x);

}  // namespace mecc

#endif  // MECC_SOLUTION_H_
