/* SPDX-License-Identifier: Apache-2.0 */

#include "support/testkit.hpp"

#include <qaprlt/bnb.hpp>
#include <qaprlt/heuristic.hpp>

#include <doctest.h>

using namespace qaprlt;

TEST_CASE("swap_delta equals the brute-force difference")
{
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::size_t n = 3 + seed % 6;
    const QapInstance inst = testkit::random_instance(n, seed, 40, seed % 3 == 0);
    std::vector<int> loc(n);
    std::iota(loc.begin(), loc.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(loc.begin(), loc.end(), rng);
    const Permutation p(loc);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t s = 0; s < n; ++s) {
        if (r == s) { continue; }
        std::vector<int> q = loc;
        std::swap(q[r], q[s]);
        CHECK(swap_delta(inst, p, r, s) == testkit::objective(inst, q) - testkit::objective(inst, loc));
      }
    }
  }
}

TEST_CASE("local search descends to a swap-local optimum")
{
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t n = 4 + seed % 5;
    const QapInstance inst = testkit::random_instance(n, seed);
    std::vector<int> loc(n);
    std::iota(loc.begin(), loc.end(), 0);
    std::mt19937_64 rng(seed * 31);
    std::shuffle(loc.begin(), loc.end(), rng);
    const Permutation start(loc);
    const Permutation out = local_search_2opt(inst, start);
    const cost_t v = evaluate(inst, out);
    CHECK(v <= evaluate(inst, start));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t s = r + 1; s < n; ++s) {
        Permutation q = out;
        q.swap_facilities(r, s);
        CHECK(evaluate(inst, q) >= v);
      }
    }
    CHECK(local_search_2opt(inst, out) == out);
    if (n <= 6) { CHECK(v >= testkit::brute_force_optimum(inst)); }
  }
}

TEST_CASE("heuristic bound is valid, exact and deterministic")
{
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t n = 5 + seed % 3;
    const QapInstance inst = testkit::random_instance(n, seed);
    HeuristicConfig cfg;
    cfg.restarts = 10;
    cfg.rng_seed = seed;
    const HeuristicResult a = heuristic_ub(inst, cfg);
    const HeuristicResult b = heuristic_ub(inst, cfg);
    CHECK(a.perm == b.perm);
    CHECK(a.value == evaluate(inst, a.perm));
    CHECK(a.value >= oracle_qap(inst).value);
  }
}

TEST_CASE("zero instance heuristic is optimal")
{
  QapInstance inst = testkit::random_instance(5, 1);
  std::fill(inst.flow.begin(), inst.flow.end(), 0);
  CHECK(heuristic_ub(inst, HeuristicConfig{}).value == 0);
}
