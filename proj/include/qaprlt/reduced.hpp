/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <qaprlt/instance.hpp>

#include <span>
#include <vector>

namespace qaprlt {

struct Assignment {
  int facility = 0;
  int location = 0;
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// The QAP left over once some facilities are fixed: a size-n problem over
/// the free facilities/locations with an explicit linear cost that absorbs
/// every interaction with the fixed part, plus a constant.
///
/// cost(p) = constant + sum_k linear[k][p(k)] + sum_{k != m} flow[k][m] * dist[p(k)][p(m)]
/// equals the original objective of the completed permutation.
struct ReducedProblem {
  std::size_t n = 0;
  std::vector<cost_t> flow;
  std::vector<cost_t> dist;
  std::vector<cost_t> linear;
  cost_t constant = 0;
  std::vector<int> facilities;  // local -> original, ascending
  std::vector<int> locations;   // local -> original, ascending

  cost_t f(std::size_t k, std::size_t m) const { return flow[k * n + m]; }
  cost_t d(std::size_t l, std::size_t q) const { return dist[l * n + q]; }
  cost_t lin(std::size_t k, std::size_t l) const { return linear[k * n + l]; }
};

/// Throws std::invalid_argument if `fixed` is not mutually feasible.
ReducedProblem reduce(const QapInstance& inst, std::span<const Assignment> fixed);

/// Objective of the local permutation `local` (size rp.n).
cost_t evaluate(const ReducedProblem& rp, std::span<const int> local);

/// Lifts a local permutation of the reduced problem back to the full instance.
Permutation complete(const QapInstance& inst,
                     std::span<const Assignment> fixed,
                     const ReducedProblem& rp,
                     std::span<const int> local);

}  // namespace qaprlt
