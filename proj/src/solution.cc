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

#include "mecc/solution.h"

#include <algorithm>

namespace mecc {

void QualityChoice::Select(int user, int level) {
  std::fill_n(x_.begin() + user * levels_, levels_, 0);
  set(user, level, 1);
}

int QualityChoice::Level(int user) const {
  int found = -1;
  for (int q = 0; q < levels_; ++q) {
    if (at(user, q) == 0) continue;
    if (at(user, q) != 1 || found >= 0) return -1;
    found = q;
  }
  return found;
}

std::vector<int> LevelCounts(const QualityChoice& x) {
  std::vector<int> counts(x.levels(), 0);
  for (int i = 0; i < x.users(); ++i) {
    const int q = x.Level(i);
    if (q >= 0) ++counts[q];
  }
  return counts;
}

double MeanUtility(const QualityChoice& x, const std::vector<double>& scores) {
  if (x.users() == 0) return 0.0;
  const std::vector<int> counts = LevelCounts(x);
  double total = 0.0;
  for (int q = 0; q < x.levels(); ++q) total += counts[q] * scores[q];
  return total / x.users();
}

}  // namespace mecc
