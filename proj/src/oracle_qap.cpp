/* SPDX-License-Identifier: Apache-2.0 */

#include <qaprlt/bnb.hpp>

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace qaprlt {

OracleResult oracle_qap(const QapInstance& inst)
{
  inst.validate();
  if (inst.n > 8) { throw std::invalid_argument("oracle_qap enumerates n!; refusing n > 8"); }
  std::vector<int> p(inst.n);
  std::iota(p.begin(), p.end(), 0);
  OracleResult best;
  bool first = true;
  do {
    Permutation perm(p);
    const cost_t v = evaluate(inst, perm);
    // enumeration is lexicographic, so strict < keeps the first optimum
    if (first || v < best.value) {
      best.value = v;
      best.perm = std::move(perm);
      first = false;
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

}  // namespace qaprlt
