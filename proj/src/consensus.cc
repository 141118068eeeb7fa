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

#include "mecc/consensus.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mecc {

namespace {

// One local problem: a set of copies sharing a single packing constraint
//   sum_k weight_k x_k <= capacity,  0 <= x_k <= upper.
struct Block {
  std::vector<int> path;     // path of each copy
  std::vector<int> slot;     // wired slot of each copy; -1 for the RAN copy
  std::vector<double> weight;
  std::vector<double> gain;  // objective share of each copy
  double capacity = 0.0;
};

// argmax sum_k gain_k x_k - rho/2 (x_k - anchor_k)^2 over the block's
// feasible set. x_k(theta) = clip(anchor_k + (gain_k - theta w_k)/rho) is
// nonincreasing in the constraint price theta >= 0.
void SolveBlock(const Block& block, const std::vector<double>& anchor,
                double rho, double upper, std::vector<double>& out) {
  const std::size_t n = block.path.size();
  auto evaluate = [&](double theta) {
    double used = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      out[k] = std::clamp(
          anchor[k] + (block.gain[k] - theta * block.weight[k]) / rho, 0.0,
          upper);
      used += block.weight[k] * out[k];
    }
    return used;
  };
  if (evaluate(0.0) <= block.capacity) return;
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    hi = std::max(hi, (rho * anchor[k] + block.gain[k]) / block.weight[k]);
  }
  hi = hi * 2.0 + 1.0;
  for (int it = 0; it < 100 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (evaluate(mid) > block.capacity) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  evaluate(hi);
}

}  // namespace

DistributedRateSolution SolveRatesDistributed(const Instance& instance,
                                              std::span<const double> coeffs,
                                              const ConsensusOptions& options) {
  const std::size_t num_paths = instance.paths.size();
  if (coeffs.size() != num_paths) {
    throw std::invalid_argument("one coefficient per path is required");
  }
  const double upper = instance.top_rate();

  // Wired link blocks, then the RAN block last.
  std::vector<Block> blocks(instance.wired_capacity.size() + 1);
  for (std::size_t l = 0; l < instance.wired_capacity.size(); ++l) {
    blocks[l].capacity = instance.wired_capacity[l];
  }
  Block& ran = blocks.back();
  ran.capacity = instance.bandwidth;
  std::vector<int> copies_of_path(num_paths, 1);
  for (std::size_t p = 0; p < num_paths; ++p) {
    const RoutedPath& path = instance.paths[p];
    const int wired_count = static_cast<int>(path.wired.size());
    copies_of_path[p] += wired_count;
    const double wired_share =
        wired_count > 0 ? coeffs[p] / (2.0 * wired_count) : 0.0;
    for (int n = 0; n < wired_count; ++n) {
      Block& block = blocks[path.wired[n]];
      block.path.push_back(static_cast<int>(p));
      block.slot.push_back(n);
      block.weight.push_back(1.0);
      block.gain.push_back(wired_share);
    }
    ran.path.push_back(static_cast<int>(p));
    ran.slot.push_back(-1);
    ran.weight.push_back(1.0 / instance.efficiency[path.wireless]);
    ran.gain.push_back(wired_count > 0 ? coeffs[p] / 2.0 : coeffs[p]);
  }

  double rho = options.rho;
  if (!(rho > 0.0)) {
    double scale = 0.0;
    for (const Block& block : blocks) {
      for (double g : block.gain) scale = std::max(scale, std::abs(g));
    }
    rho = scale > 0.0 ? scale / upper : 1.0;
  }

  DistributedRateSolution result;
  ConsensusRates& cr = result.consensus;
  cr.consensus.assign(num_paths, 0.0);
  cr.ran_copies.assign(num_paths, 0.0);
  cr.ran_prices.assign(num_paths, 0.0);
  cr.wired_copies.resize(num_paths);
  cr.wired_prices.resize(num_paths);
  for (std::size_t p = 0; p < num_paths; ++p) {
    cr.wired_copies[p].assign(instance.paths[p].wired.size(), 0.0);
    cr.wired_prices[p].assign(instance.paths[p].wired.size(), 0.0);
  }
  auto copy = [&](std::size_t p, int slot) -> double& {
    return slot < 0 ? cr.ran_copies[p] : cr.wired_copies[p][slot];
  };
  auto price = [&](std::size_t p, int slot) -> double& {
    return slot < 0 ? cr.ran_prices[p] : cr.wired_prices[p][slot];
  };

  result.rates.rates.assign(num_paths, 0.0);
  result.rates.objective = 0.0;
  std::vector<double> best_rates(num_paths, 0.0);
  double best_objective = 0.0;
  std::vector<double> anchor;
  std::vector<double> local;
  std::vector<double> previous(num_paths);

  for (int t = 1; t <= options.max_iters; ++t) {
    for (const Block& block : blocks) {
      const std::size_t n = block.path.size();
      if (n == 0) continue;
      anchor.resize(n);
      local.resize(n);
      for (std::size_t k = 0; k < n; ++k) {
        anchor[k] = cr.consensus[block.path[k]] - price(block.path[k], block.slot[k]);
      }
      SolveBlock(block, anchor, rho, upper, local);
      for (std::size_t k = 0; k < n; ++k) copy(block.path[k], block.slot[k]) = local[k];
    }

    previous = cr.consensus;
    double consensus_move = 0.0;
    double dual_sq = 0.0;
    for (std::size_t p = 0; p < num_paths; ++p) {
      double sum = cr.ran_copies[p] + cr.ran_prices[p];
      for (std::size_t n = 0; n < cr.wired_copies[p].size(); ++n) {
        sum += cr.wired_copies[p][n] + cr.wired_prices[p][n];
      }
      cr.consensus[p] = sum / copies_of_path[p];
      const double move = cr.consensus[p] - previous[p];
      consensus_move = std::max(consensus_move, std::abs(move));
      dual_sq += copies_of_path[p] * move * move;
    }

    double disagreement = 0.0;
    double primal_sq = 0.0;
    std::vector<double> feasible(num_paths);
    for (std::size_t p = 0; p < num_paths; ++p) {
      double lowest = cr.ran_copies[p];
      double residual = cr.ran_copies[p] - cr.consensus[p];
      cr.ran_prices[p] += residual;
      disagreement = std::max(disagreement, std::abs(residual));
      primal_sq += residual * residual;
      for (std::size_t n = 0; n < cr.wired_copies[p].size(); ++n) {
        lowest = std::min(lowest, cr.wired_copies[p][n]);
        residual = cr.wired_copies[p][n] - cr.consensus[p];
        cr.wired_prices[p][n] += residual;
        disagreement = std::max(disagreement, std::abs(residual));
        primal_sq += residual * residual;
      }
      feasible[p] = std::max(0.0, lowest);
    }

    double objective = 0.0;
    for (std::size_t p = 0; p < num_paths; ++p) objective += coeffs[p] * feasible[p];
    if (t == 1 || objective > best_objective) {
      best_objective = objective;
      best_rates = feasible;
    }
    cr.iterations = t;
    cr.max_disagreement = disagreement;
    if (disagreement <= options.tolerance && consensus_move <= options.tolerance) {
      cr.converged = true;
      break;
    }

    if (options.adaptive_rho && t % 10 == 0) {
      const double primal = std::sqrt(primal_sq);
      const double dual = rho * std::sqrt(dual_sq);
      double factor = 1.0;
      if (primal > 10.0 * dual) factor = 2.0;
      if (dual > 10.0 * primal) factor = 0.5;
      if (factor != 1.0) {
        rho *= factor;
        for (std::size_t p = 0; p < num_paths; ++p) {
          cr.ran_prices[p] /= factor;
          for (double& u : cr.wired_prices[p]) u /= factor;
        }
      }
    }
  }

  result.warning = !cr.converged;
  result.rates.rates = std::move(best_rates);
  result.rates.objective = best_objective;
  return result;
}

}  // namespace mecc
