/* SPDX-License-Identifier: Apache-2.0 */

#include <qaprlt/reduced.hpp>

#include <stdexcept>

namespace qaprlt {

ReducedProblem reduce(const QapInstance& inst, std::span<const Assignment> fixed)
{
  const std::size_t n = inst.n;
  std::vector<char> fac_used(n, 0), loc_used(n, 0);
  for (const Assignment& a : fixed) {
    if (a.facility < 0 || a.location < 0 || static_cast<std::size_t>(a.facility) >= n ||
        static_cast<std::size_t>(a.location) >= n) {
      throw std::invalid_argument("fixed assignment out of range");
    }
    if (fac_used[a.facility] || loc_used[a.location]) {
      throw std::invalid_argument("fixed assignments reuse a facility or location");
    }
    fac_used[a.facility] = 1;
    loc_used[a.location] = 1;
  }

  ReducedProblem rp;
  for (std::size_t i = 0; i < n; ++i) {
    if (!fac_used[i]) { rp.facilities.push_back(static_cast<int>(i)); }
    if (!loc_used[i]) { rp.locations.push_back(static_cast<int>(i)); }
  }
  const std::size_t m = rp.facilities.size();
  rp.n = m;
  rp.flow.resize(m * m);
  rp.dist.resize(m * m);
  rp.linear.resize(m * m);

  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      rp.flow[a * m + b] = inst.f(rp.facilities[a], rp.facilities[b]);
      rp.dist[a * m + b] = inst.d(rp.locations[a], rp.locations[b]);
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t fk = rp.facilities[k];
    for (std::size_t l = 0; l < m; ++l) {
      const std::size_t ll = rp.locations[l];
      cost_t lin = inst.f(fk, fk) * inst.d(ll, ll);
      for (const Assignment& a : fixed) {
        lin += inst.f(a.facility, fk) * inst.d(a.location, ll) + inst.f(fk, a.facility) * inst.d(ll, a.location);
      }
      rp.linear[k * m + l] = lin;
    }
  }
  for (const Assignment& a : fixed) {
    for (const Assignment& b : fixed) { rp.constant += inst.f(a.facility, b.facility) * inst.d(a.location, b.location); }
  }
  return rp;
}

cost_t evaluate(const ReducedProblem& rp, std::span<const int> local)
{
  if (local.size() != rp.n) { throw std::invalid_argument("local permutation size mismatch"); }
  cost_t total = rp.constant;
  for (std::size_t k = 0; k < rp.n; ++k) {
    total += rp.lin(k, local[k]);
    for (std::size_t m = 0; m < rp.n; ++m) {
      if (m != k) { total += rp.f(k, m) * rp.d(local[k], local[m]); }
    }
  }
  return total;
}

Permutation complete(const QapInstance& inst,
                     std::span<const Assignment> fixed,
                     const ReducedProblem& rp,
                     std::span<const int> local)
{
  std::vector<int> p(inst.n, -1);
  for (const Assignment& a : fixed) { p[a.facility] = a.location; }
  for (std::size_t k = 0; k < rp.n; ++k) { p[rp.facilities[k]] = rp.locations[local[k]]; }
  return Permutation(std::move(p));
}

}  // namespace qaprlt
