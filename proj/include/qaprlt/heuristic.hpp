/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <qaprlt/instance.hpp>

#include <cstdint>

namespace qaprlt {

struct HeuristicConfig {
  std::size_t restarts = 50;
  std::uint64_t rng_seed = 1;
  double time_cap = 0.0;  // seconds; 0 = none. Checked between restarts.
};

struct HeuristicResult {
  Permutation perm;
  cost_t value = 0;
};

/// Change of evaluate() when facilities r and s exchange locations.
cost_t swap_delta(const QapInstance& inst, const Permutation& p, std::size_t r, std::size_t s);

/// Steepest-descent over pairwise swaps until no swap improves.
Permutation local_search_2opt(const QapInstance& inst, Permutation start);

/// Multi-start local search from seeded random permutations. The best result
/// is chosen by value, then lexicographically smallest permutation.
HeuristicResult heuristic_ub(const QapInstance& inst, const HeuristicConfig& cfg);

}  // namespace qaprlt
