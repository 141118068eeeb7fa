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

#include "mecc/lp.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mecc {

int LinearProgram::AddVariable(double cost, double lo, double hi) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  return num_vars() - 1;
}

void LinearProgram::AddRow(std::vector<Term> terms, double rhs) {
  rows.push_back({std::move(terms), rhs});
}

const char* ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

enum class VarState : unsigned char { kBasic, kAtLower, kAtUpper };

// Tableau over structural, slack and artificial columns. Row i holds
// B^-1 A restricted to row i; `value_` holds the current value of every
// column (basic values included).
class Tableau {
 public:
  Tableau(const LinearProgram& lp, const LpOptions& options)
      : options_(options),
        rows_(static_cast<int>(lp.rows.size())),
        structural_(lp.num_vars()) {
    std::vector<double> residual(rows_);
    for (int i = 0; i < rows_; ++i) {
      double r = lp.rows[i].rhs;
      for (const auto& t : lp.rows[i].terms) r -= t.coef * lp.lower[t.var];
      residual[i] = r;
    }
    int artificials = 0;
    for (double r : residual) artificials += r < 0.0 ? 1 : 0;
    cols_ = structural_ + rows_ + artificials;

    table_.assign(static_cast<std::size_t>(rows_) * cols_, 0.0);
    lo_.assign(cols_, 0.0);
    hi_.assign(cols_, kInfinity);
    value_.assign(cols_, 0.0);
    state_.assign(cols_, VarState::kAtLower);
    basis_.assign(rows_, -1);

    for (int j = 0; j < structural_; ++j) {
      lo_[j] = lp.lower[j];
      hi_[j] = lp.upper[j];
      value_[j] = lo_[j];
    }
    int next_artificial = structural_ + rows_;
    for (int i = 0; i < rows_; ++i) {
      const int slack = structural_ + i;
      const double sign = residual[i] < 0.0 ? -1.0 : 1.0;
      for (const auto& t : lp.rows[i].terms) at(i, t.var) += sign * t.coef;
      at(i, slack) = sign;
      if (residual[i] < 0.0) {
        const int art = next_artificial++;
        at(i, art) = 1.0;
        basis_[i] = art;
        state_[art] = VarState::kBasic;
        value_[art] = -residual[i];
        first_artificial_ = std::min(first_artificial_, art);
      } else {
        basis_[i] = slack;
        state_[slack] = VarState::kBasic;
        value_[slack] = residual[i];
      }
    }
    first_artificial_ = std::min(first_artificial_, cols_);
    max_iterations_ = options.max_iterations > 0
                          ? options.max_iterations
                          : 20000 + 200 * (rows_ + cols_);
  }

  bool has_artificials() const { return first_artificial_ < cols_; }

  double ArtificialSum() const {
    double sum = 0.0;
    for (int j = first_artificial_; j < cols_; ++j) sum += value_[j];
    return sum;
  }

  void FixArtificials() {
    for (int j = first_artificial_; j < cols_; ++j) {
      hi_[j] = 0.0;
      if (state_[j] != VarState::kBasic) {
        value_[j] = 0.0;
        state_[j] = VarState::kAtLower;
      }
    }
  }

  // Runs simplex iterations for `cost` until optimal. Returns false when
  // unbounded.
  bool Optimize(const std::vector<double>& cost) {
    std::vector<double> reduced(cols_);
    while (true) {
      if (++iterations_ > max_iterations_) {
        std::ostringstream msg;
        msg << "simplex iteration cap " << max_iterations_ << " exceeded ("
            << rows_ << " rows, " << cols_ << " columns)";
        throw NumericalFailure(msg.str());
      }
      for (int j = 0; j < cols_; ++j) reduced[j] = cost[j];
      for (int i = 0; i < rows_; ++i) {
        const double cb = cost[basis_[i]];
        if (cb == 0.0) continue;
        const double* row = &table_[static_cast<std::size_t>(i) * cols_];
        for (int j = 0; j < cols_; ++j) reduced[j] -= cb * row[j];
      }

      int entering = -1;
      double direction = 0.0;
      for (int j = 0; j < cols_; ++j) {
        if (state_[j] == VarState::kBasic) continue;
        if (state_[j] == VarState::kAtLower && hi_[j] > lo_[j] &&
            reduced[j] > options_.optimality_tol) {
          entering = j;
          direction = 1.0;
          break;
        }
        if (state_[j] == VarState::kAtUpper &&
            reduced[j] < -options_.optimality_tol) {
          entering = j;
          direction = -1.0;
          break;
        }
      }
      if (entering < 0) {
        --iterations_;
        return true;
      }

      double step = hi_[entering] - lo_[entering];
      int leaving_row = -1;
      bool leaving_to_upper = false;
      for (int i = 0; i < rows_; ++i) {
        const double alpha = at(i, entering) * direction;
        const int b = basis_[i];
        double limit;
        bool to_upper;
        if (alpha > options_.pivot_tol) {
          limit = (value_[b] - lo_[b]) / alpha;
          to_upper = false;
        } else if (alpha < -options_.pivot_tol && std::isfinite(hi_[b])) {
          limit = (hi_[b] - value_[b]) / -alpha;
          to_upper = true;
        } else {
          continue;
        }
        limit = std::max(limit, 0.0);
        const double tie = 1e-12 * std::max(1.0, limit);
        const bool better =
            limit < step - tie ||
            (std::abs(limit - step) <= tie &&
             (leaving_row < 0 || b < basis_[leaving_row]));
        if (better) {
          step = limit;
          leaving_row = i;
          leaving_to_upper = to_upper;
        }
      }
      if (!std::isfinite(step)) return false;

      for (int i = 0; i < rows_; ++i) {
        value_[basis_[i]] -= at(i, entering) * direction * step;
      }
      if (leaving_row < 0) {
        // Bound flip.
        if (direction > 0) {
          value_[entering] = hi_[entering];
          state_[entering] = VarState::kAtUpper;
        } else {
          value_[entering] = lo_[entering];
          state_[entering] = VarState::kAtLower;
        }
        continue;
      }
      value_[entering] += direction * step;
      const int leaving = basis_[leaving_row];
      value_[leaving] = leaving_to_upper ? hi_[leaving] : lo_[leaving];
      state_[leaving] =
          leaving_to_upper ? VarState::kAtUpper : VarState::kAtLower;
      state_[entering] = VarState::kBasic;
      basis_[leaving_row] = entering;
      Pivot(leaving_row, entering);
    }
  }

  std::vector<double> PhaseOneCost() const {
    std::vector<double> cost(cols_, 0.0);
    for (int j = first_artificial_; j < cols_; ++j) cost[j] = -1.0;
    return cost;
  }

  std::vector<double> PhaseTwoCost(const std::vector<double>& objective) const {
    std::vector<double> cost(cols_, 0.0);
    std::copy(objective.begin(), objective.end(), cost.begin());
    return cost;
  }

  std::vector<double> Structural() const {
    std::vector<double> x(value_.begin(), value_.begin() + structural_);
    for (int j = 0; j < structural_; ++j) {
      x[j] = std::clamp(x[j], lo_[j], hi_[j]);
    }
    return x;
  }

  int iterations() const { return iterations_; }

 private:
  double& at(int i, int j) { return table_[static_cast<std::size_t>(i) * cols_ + j]; }
  double at(int i, int j) const {
    return table_[static_cast<std::size_t>(i) * cols_ + j];
  }

  void Pivot(int r, int c) {
    double* prow = &table_[static_cast<std::size_t>(r) * cols_];
    const double inv = 1.0 / prow[c];
    for (int j = 0; j < cols_; ++j) prow[j] *= inv;
    prow[c] = 1.0;
    for (int i = 0; i < rows_; ++i) {
      if (i == r) continue;
      double* row = &table_[static_cast<std::size_t>(i) * cols_];
      const double factor = row[c];
      if (factor == 0.0) continue;
      for (int j = 0; j < cols_; ++j) row[j] -= factor * prow[j];
      row[c] = 0.0;
    }
  }

  LpOptions options_;
  int rows_;
  int structural_;
  int cols_ = 0;
  int first_artificial_ = 1 << 30;
  int iterations_ = 0;
  int max_iterations_ = 0;
  std::vector<double> table_;
  std::vector<double> lo_;
  std::vector<double> hi_;
  std::vector<double> value_;
  std::vector<VarState> state_;
  std::vector<int> basis_;
};

}  // namespace

LpResult SolveLp(const LinearProgram& lp, const LpOptions& options) {
  const int n = lp.num_vars();
  if (static_cast<int>(lp.lower.size()) != n ||
      static_cast<int>(lp.upper.size()) != n) {
    throw std::invalid_argument("LP bound vectors do not match variables");
  }
  double scale = 1.0;
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(lp.lower[j])) {
      throw std::invalid_argument("LP lower bounds must be finite");
    }
    if (lp.upper[j] < lp.lower[j]) {
      LpResult empty;
      empty.status = LpStatus::kInfeasible;
      return empty;
    }
  }
  for (const auto& row : lp.rows) {
    scale = std::max(scale, std::abs(row.rhs));
    for (const auto& t : row.terms) {
      if (t.var < 0 || t.var >= n) {
        throw std::invalid_argument("LP row references an unknown variable");
      }
    }
  }

  Tableau tableau(lp, options);
  LpResult result;
  if (tableau.has_artificials()) {
    tableau.Optimize(tableau.PhaseOneCost());
    if (tableau.ArtificialSum() > options.feasibility_tol * scale) {
      result.status = LpStatus::kInfeasible;
      result.iterations = tableau.iterations();
      return result;
    }
    tableau.FixArtificials();
  }
  if (!tableau.Optimize(tableau.PhaseTwoCost(lp.objective))) {
    result.status = LpStatus::kUnbounded;
    result.iterations = tableau.iterations();
    return result;
  }
  result.status = LpStatus::kOptimal;
  result.x = tableau.Structural();
  result.iterations = tableau.iterations();
  for (int j = 0; j < n; ++j) result.objective += lp.objective[j] * result.x[j];
  return result;
}

}  // namespace mecc
