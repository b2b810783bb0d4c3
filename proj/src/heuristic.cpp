/* SPDX-License-Identifier: Apache-2.0 */

#include <qaprlt/heuristic.hpp>

#include <chrono>
#include <random>

namespace qaprlt {

cost_t swap_delta(const QapInstance& inst, const Permutation& p, std::size_t r, std::size_t s)
{
  const auto pr = static_cast<std::size_t>(p[r]);
  const auto ps = static_cast<std::size_t>(p[s]);
  cost_t d = (inst.f(r, r) - inst.f(s, s)) * (inst.d(ps, ps) - inst.d(pr, pr)) +
             (inst.f(r, s) - inst.f(s, r)) * (inst.d(ps, pr) - inst.d(pr, ps));
  for (std::size_t k = 0; k < inst.n; ++k) {
    if (k == r || k == s) { continue; }
    const auto pk = static_cast<std::size_t>(p[k]);
    d += (inst.f(k, r) - inst.f(k, s)) * (inst.d(pk, ps) - inst.d(pk, pr)) +
         (inst.f(r, k) - inst.f(s, k)) * (inst.d(ps, pk) - inst.d(pr, pk));
  }
  return d;
}

namespace {

// Delta of swap (i,j) given the delta before the swap (r,s) that was just
// applied to p; valid when {i,j} and {r,s} are disjoint.
cost_t updated_delta(const QapInstance& inst,
                     const Permutation& p,
                     cost_t old,
                     std::size_t i,
                     std::size_t j,
                     std::size_t r,
                     std::size_t s)
{
  const auto pi = static_cast<std::size_t>(p[i]), pj = static_cast<std::size_t>(p[j]);
  const auto pr = static_cast<std::size_t>(p[r]), ps = static_cast<std::size_t>(p[s]);
  return old +
         (inst.f(r, i) - inst.f(r, j) + inst.f(s, j) - inst.f(s, i)) *
           (inst.d(ps, pi) - inst.d(ps, pj) + inst.d(pr, pj) - inst.d(pr, pi)) +
         (inst.f(i, r) - inst.f(j, r) + inst.f(j, s) - inst.f(i, s)) *
           (inst.d(pi, ps) - inst.d(pj, ps) + inst.d(pj, pr) - inst.d(pi, pr));
}

Permutation random_permutation(std::size_t n, std::mt19937_64& rng)
{
  std::vector<int> p(n);
  for (std::size_t i = 0; i < n; ++i) { p[i] = static_cast<int>(i); }
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(p[i - 1], p[j]);
  }
  return Permutation(std::move(p));
}

}  // namespace

Permutation local_search_2opt(const QapInstance& inst, Permutation p)
{
  const std::size_t n = inst.n;
  if (p.size() != n) { throw std::invalid_argument("start permutation size mismatch"); }
  std::vector<cost_t> delta(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) { delta[i * n + j] = swap_delta(inst, p, i, j); }
  }
  for (;;) {
    std::size_t best_r = 0, best_s = 0;
    cost_t best = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (delta[i * n + j] < best) {
          best = delta[i * n + j];
          best_r = i;
          best_s = j;
        }
      }
    }
    if (best >= 0) { return p; }
    p.swap_facilities(best_r, best_s);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (i != best_r && i != best_s && j != best_r && j != best_s) {
          delta[i * n + j] = updated_delta(inst, p, delta[i * n + j], i, j, best_r, best_s);
        } else {
          delta[i * n + j] = swap_delta(inst, p, i, j);
        }
      }
    }
  }
}

HeuristicResult heuristic_ub(const QapInstance& inst, const HeuristicConfig& cfg)
{
  if (cfg.restarts < 1) { throw std::invalid_argument("heuristic needs at least one restart"); }
  const auto start = std::chrono::steady_clock::now();
  HeuristicResult best;
  bool have = false;
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    if (have && cfg.time_cap > 0.0 &&
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() > cfg.time_cap) {
      break;
    }
    std::mt19937_64 rng(cfg.rng_seed * 0x9E3779B97F4A7C15ULL + r);
    Permutation p = local_search_2opt(inst, random_permutation(inst.n, rng));
    const cost_t v = evaluate(inst, p);
    if (!have || v < best.value || (v == best.value && p < best.perm)) {
      best = HeuristicResult{std::move(p), v};
      have = true;
    }
  }
  return best;
}

}  // namespace qaprlt
