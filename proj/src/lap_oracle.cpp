/* SPDX-License-Identifier: Apache-2.0 */

#include "lap_detail.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace qaprlt {

double oracle_lap(std::span<const double> cost, std::size_t m)
{
  if (m > 10) { throw std::invalid_argument("oracle_lap enumerates m! assignments and refuses m > 10"); }
  if (m == 0 || cost.size() != m * m) { throw std::invalid_argument("assignment matrix must be m x m with m >= 1"); }
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t r = 0; r < m; ++r) { total += cost[r * m + perm[r]]; }
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace qaprlt
