/* SPDX-License-Identifier: Apache-2.0 */

#include "lap_detail.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>

namespace qaprlt {

namespace {

// Forward auction on benefits -cost. Prices are returned in `price`,
// assignment in `owner_of` (column -> row) and `col_of` (row -> column).
template <typename T>
void auction_phases(const std::vector<T>& cost,
                    std::size_t m,
                    T eps_start,
                    T eps_final,
                    double reduction,
                    std::vector<T>& price,
                    std::vector<int>& col_of)
{
  price.assign(m, T{0});
  col_of.assign(m, -1);
  std::vector<int> owner_of(m, -1);
  T eps = std::max(eps_start, eps_final);
  std::deque<int> unassigned;
  for (;;) {
    std::fill(col_of.begin(), col_of.end(), -1);
    std::fill(owner_of.begin(), owner_of.end(), -1);
    unassigned.clear();
    for (std::size_t r = 0; r < m; ++r) { unassigned.push_back(static_cast<int>(r)); }

    while (!unassigned.empty()) {
      const int r = unassigned.front();
      unassigned.pop_front();
      const T* row = cost.data() + static_cast<std::size_t>(r) * m;
      // value of column s for row r is -(cost + price); find best and second best
      std::size_t best = 0;
      T best_val = row[0] + price[0];
      T second_val = std::numeric_limits<T>::max();
      for (std::size_t s = 1; s < m; ++s) {
        const T val = row[s] + price[s];
        if (val < best_val) {
          second_val = best_val;
          best_val = val;
          best = s;
        } else if (val < second_val) {
          second_val = val;
        }
      }
      if (m == 1) { second_val = best_val; }
      // bid: raise the price so the margin over the runner-up shrinks to -eps
      price[best] += (second_val - best_val) + eps;
      const int prev = owner_of[best];
      owner_of[best] = r;
      col_of[r] = static_cast<int>(best);
      if (prev >= 0) {
        col_of[prev] = -1;
        unassigned.push_back(prev);
      }
    }
    if (eps <= eps_final) { break; }
    eps = std::max(eps_final, static_cast<T>(eps / static_cast<T>(reduction)));
  }
}

// Turns an assignment plus approximate prices into exact complementary
// slackness. Column potentials pi satisfy pi_s - pi_a(r) <= c_rs - c_r,a(r);
// negative cycles are cancelled, which also makes the assignment optimal.
template <typename T>
void repair_potentials(const std::vector<T>& cost, std::size_t m, T tol, std::vector<int>& col_of, std::vector<T>& pi)
{
  std::vector<int> pred_row(m, -1);
  std::vector<int> mark(m);
  for (;;) {
    std::fill(pred_row.begin(), pred_row.end(), -1);
    bool relaxed = true;
    std::vector<std::pair<int, int>> moves;  // (row, new column)
    for (std::size_t round = 0; relaxed && moves.empty(); ++round) {
      relaxed = false;
      for (std::size_t r = 0; r < m; ++r) {
        const std::size_t a = static_cast<std::size_t>(col_of[r]);
        const T* row = cost.data() + r * m;
        const T base = pi[a] - row[a];
        for (std::size_t s = 0; s < m; ++s) {
          const T cand = base + row[s];
          if (cand < pi[s] - tol) {
            pi[s] = cand;
            pred_row[s] = static_cast<int>(r);
            relaxed = true;
          }
        }
      }
      if (!relaxed || (round + 1) % m != 0) { continue; }
      // a cycle in the predecessor graph of columns has negative weight
      std::fill(mark.begin(), mark.end(), -1);
      for (std::size_t start = 0; start < m && moves.empty(); ++start) {
        std::size_t s = start;
        while (pred_row[s] >= 0 && mark[s] < 0) {
          mark[s] = static_cast<int>(start);
          s = static_cast<std::size_t>(col_of[pred_row[s]]);
        }
        if (pred_row[s] < 0 || mark[s] != static_cast<int>(start)) { continue; }
        std::size_t cur = s;
        do {
          const int r = pred_row[cur];
          moves.emplace_back(r, static_cast<int>(cur));
          cur = static_cast<std::size_t>(col_of[r]);
        } while (cur != s);
      }
    }
    if (moves.empty()) { return; }
    for (auto [r, c] : moves) { col_of[r] = c; }
  }
}

template <typename T>
void solve_auction(const std::vector<T>& cost,
                   std::size_t m,
                   T tol,
                   T eps_start,
                   T eps_final,
                   double reduction,
                   std::vector<int>& col_of,
                   std::vector<T>& u,
                   std::vector<T>& v)
{
  std::vector<T> price;
  auction_phases(cost, m, eps_start, eps_final, reduction, price, col_of);
  // reduced cost c_rs + p_s is what rows minimise, so pi = -p is nearly feasible
  std::vector<T> pi(m);
  for (std::size_t s = 0; s < m; ++s) { pi[s] = -price[s]; }
  repair_potentials(cost, m, tol, col_of, pi);
  u.resize(m);
  v = pi;
  for (std::size_t r = 0; r < m; ++r) {
    const auto a = static_cast<std::size_t>(col_of[r]);
    u[r] = cost[r * m + a] - pi[a];
  }
}

}  // namespace

LapCertificate lap_auction(std::span<const double> cost, std::size_t m, const AuctionSchedule& schedule)
{
  detail::check_cost_matrix(cost, m);
  const double max_cost = *std::max_element(cost.begin(), cost.end());

  // Dyadic inputs run on integers scaled by (m+1) so that a final epsilon of 1
  // is below 1/m of the cost granularity, which makes the result exact.
  const double scale = schedule.integer_scale;
  const double int_limit = 4.0e18 / static_cast<double>(m + 1) / 4.0;
  bool integral = max_cost * scale < int_limit;
  if (integral) {
    for (double c : cost) {
      const double scaled = c * scale;
      if (scaled != std::floor(scaled)) {
        integral = false;
        break;
      }
    }
  }

  std::vector<int> col_of;
  std::vector<double> u(m), v(m);
  if (integral) {
    std::vector<std::int64_t> icost(m * m);
    const auto mult = static_cast<std::int64_t>(m + 1);
    for (std::size_t e = 0; e < m * m; ++e) { icost[e] = static_cast<std::int64_t>(cost[e] * scale) * mult; }
    const std::int64_t imax = *std::max_element(icost.begin(), icost.end());
    std::vector<std::int64_t> iu, iv;
    solve_auction<std::int64_t>(icost, m, 0, std::max<std::int64_t>(1, imax / 2), 1, schedule.reduction, col_of, iu, iv);
    const double back = scale * static_cast<double>(mult);
    for (std::size_t r = 0; r < m; ++r) {
      u[r] = static_cast<double>(iu[r]) / back;
      v[r] = static_cast<double>(iv[r]) / back;
    }
  } else {
    std::vector<double> dcost(cost.begin(), cost.end());
    const double eps_final = 1e-9 * std::max(1.0, max_cost) / static_cast<double>(m + 1);
    solve_auction<double>(dcost, m, 1e-12 * std::max(1.0, max_cost), std::max(eps_final, max_cost / 2.0), eps_final, schedule.reduction, col_of, u, v);
  }
  return detail::make_certificate(cost, m, std::move(col_of), std::move(u), std::move(v));
}

}  // namespace qaprlt
