/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <qaprlt/instance.hpp>
#include <qaprlt/lap.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace testkit {

using qaprlt::cost_t;

// Random instance with entries in [0, max_entry]. QAPLIB-style zero diagonals
// unless `diagonal` is set.
inline qaprlt::QapInstance random_instance(std::size_t n, std::uint64_t seed, cost_t max_entry = 50,
                                           bool diagonal = false)
{
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<cost_t> dist(0, max_entry);
  qaprlt::QapInstance inst;
  inst.name = "rand" + std::to_string(n) + "_" + std::to_string(seed);
  inst.n = n;
  inst.flow.resize(n * n);
  inst.dist.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      inst.flow[i * n + k] = (i == k && !diagonal) ? 0 : dist(rng);
      inst.dist[i * n + k] = (i == k && !diagonal) ? 0 : dist(rng);
    }
  }
  return inst;
}

inline std::vector<double> random_matrix(std::size_t m, std::mt19937_64& rng, int max_entry)
{
  std::uniform_int_distribution<int> dist(0, max_entry);
  std::vector<double> c(m * m);
  for (double& x : c) { x = dist(rng); }
  return c;
}

// Written directly from the objective, without the library's evaluate().
inline cost_t objective(const qaprlt::QapInstance& inst, const std::vector<int>& p)
{
  cost_t s = 0;
  for (std::size_t i = 0; i < inst.n; ++i) {
    for (std::size_t k = 0; k < inst.n; ++k) { s += inst.flow[i * inst.n + k] * inst.dist[p[i] * inst.n + p[k]]; }
  }
  return s;
}

inline cost_t brute_force_optimum(const qaprlt::QapInstance& inst)
{
  std::vector<int> p(inst.n);
  std::iota(p.begin(), p.end(), 0);
  cost_t best = objective(inst, p);
  while (std::next_permutation(p.begin(), p.end())) { best = std::min(best, objective(inst, p)); }
  return best;
}

inline std::vector<std::vector<int>> all_permutations(std::size_t n)
{
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline bool close(double a, double b, double rel = 1e-6)
{
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

// Independent soundness check of a LAP certificate. Returns an empty string
// when sound, otherwise what is wrong.
inline std::string certificate_problem(const qaprlt::LapCertificate& cert, const std::vector<double>& cost)
{
  const std::size_t m = cert.m;
  if (cert.assign.size() != m || cert.u.size() != m || cert.v.size() != m || cert.residual.size() != m * m) {
    return "shape";
  }
  std::vector<char> seen(m, 0);
  double primal = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    const int s = cert.assign[r];
    if (s < 0 || static_cast<std::size_t>(s) >= m || seen[s]) { return "assignment is not a permutation"; }
    seen[s] = 1;
    primal += cost[r * m + s];
  }
  double scale = 1.0;
  for (double c : cost) { scale = std::max(scale, std::abs(c)); }
  const double tol = 1e-9 * scale * static_cast<double>(m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t s = 0; s < m; ++s) {
      const double res = cert.residual[r * m + s];
      if (res < 0.0) { return "negative residual"; }
      if (std::abs(res - (cost[r * m + s] - cert.u[r] - cert.v[s])) > tol) { return "residual identity"; }
    }
    if (cert.residual[r * m + cert.assign[r]] != 0.0) { return "nonzero residual on the assignment"; }
  }
  const double dual = std::accumulate(cert.u.begin(), cert.u.end(), 0.0) + std::accumulate(cert.v.begin(), cert.v.end(), 0.0);
  if (std::abs(dual - primal) > tol || std::abs(cert.value - primal) > tol) { return "value identity"; }
  return {};
}

}  // namespace testkit
