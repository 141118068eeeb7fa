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

// Dense bounded-variable primal simplex for small linear programs of the form
//
//   maximize    c'x
//   subject to  A x <= b
//               lo <= x <= hi      (lo finite, hi may be +inf)
//
// Phase 1 minimizes the sum of artificial variables on rows whose residual
// at x = lo is negative. Entering and leaving variables follow Bland's
// smallest-index rule, which rules out cycling.

#ifndef MECC_LP_H_
#define MECC_LP_H_

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mecc {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct LinearProgram {
  struct Term {
    int var;
    double coef;
  };
  struct Row {
    std::vector<Term> terms;
    double rhs = 0.0;
  };

  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Row> rows;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int AddVariable(double cost, double lo, double hi);
  void AddRow(std::vector<Term> terms, double rhs);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* ToString(LpStatus status);

struct LpOptions {
  // 0 picks a cap proportional to the tableau size.
  int max_iterations = 0;
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-11;
  double pivot_tol = 1e-11;
};

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
};

// Raised when the iteration cap trips (the cycling guard).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

LpResult SolveLp(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace mecc

#endif  // MECC_LP_H_
