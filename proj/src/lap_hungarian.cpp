/* SPDX-License-Identifier: Apache-2.0 */

#include "lap_detail.hpp"

#include <algorithm>
#include <limits>

namespace qaprlt {

double residual_tolerance(std::span<const double> cost)
{
  double mx = 1.0;
  for (double c : cost) { mx = std::max(mx, std::abs(c)); }
  return 1e-9 * mx;
}

namespace detail {

void hungarian_solve(std::span<const double> cost, std::size_t m, LapWorkspace& ws)
{
  constexpr double inf = std::numeric_limits<double>::infinity();
  ws.u.assign(m + 1, 0.0);
  ws.v.assign(m + 1, 0.0);
  ws.p.assign(m + 1, 0);
  ws.way.assign(m + 1, 0);
  ws.minv.resize(m + 1);
  ws.used.resize(m + 1);

  double* u = ws.u.data();
  double* v = ws.v.data();
  int* p = ws.p.data();
  int* way = ws.way.data();
  double* minv = ws.minv.data();
  char* used = ws.used.data();

  for (std::size_t i = 1; i <= m; ++i) {
    p[0] = static_cast<int>(i);
    std::size_t j0 = 0;
    std::fill(minv, minv + m + 1, inf);
    std::fill(used, used + m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = static_cast<std::size_t>(p[j0]);
      const double* row = cost.data() + (i0 - 1) * m - 1;
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) { continue; }
        const double cur = row[j] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = static_cast<int>(j0);
        }
        // strict comparison: lowest column wins ties
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = static_cast<std::size_t>(way[j0]);
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
}

LapCertificate make_certificate(std::span<const double> cost,
                                std::size_t m,
                                std::vector<int> assign,
                                std::vector<double> u,
                                std::vector<double> v)
{
  const double tau = residual_tolerance(cost);
  LapCertificate cert;
  cert.m = m;
  cert.residual.resize(m * m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t s = 0; s < m; ++s) {
      double res = cost[r * m + s] - u[r] - v[s];
      if (res < 0.0) {
        if (res < -tau) {
          throw CertificateError("negative residual " + std::to_string(res) + " at (" + std::to_string(r) + "," +
                                 std::to_string(s) + ")");
        }
        res = 0.0;
      }
      cert.residual[r * m + s] = res;
    }
  }
  double value = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    const auto s = static_cast<std::size_t>(assign[r]);
    const double tight = cert.residual[r * m + s];
    if (tight > tau) {
      throw CertificateError("assigned cell (" + std::to_string(r) + "," + std::to_string(s) +
                             ") is not tight: residual " + std::to_string(tight));
    }
    cert.residual[r * m + s] = 0.0;
    value += cost[r * m + s];
  }
  cert.value = value;
  cert.assign = std::move(assign);
  cert.u = std::move(u);
  cert.v = std::move(v);
  return cert;
}

}  // namespace detail

LapCertificate lap_hungarian(std::span<const double> cost, std::size_t m)
{
  detail::check_cost_matrix(cost, m);
  LapWorkspace ws;
  detail::hungarian_solve(cost, m, ws);
  std::vector<int> assign(m);
  for (std::size_t j = 1; j <= m; ++j) { assign[ws.p[j] - 1] = static_cast<int>(j - 1); }
  std::vector<double> u(ws.u.begin() + 1, ws.u.end());
  std::vector<double> v(ws.v.begin() + 1, ws.v.end());
  return detail::make_certificate(cost, m, std::move(assign), std::move(u), std::move(v));
}

double concentrate_block(std::span<double> block, std::size_t m, LapMethod method, LapWorkspace& ws)
{
  if (method == LapMethod::auction) {
    LapCertificate cert = lap_auction(block, m);
    std::copy(cert.residual.begin(), cert.residual.end(), block.begin());
    return cert.value;
  }
  detail::check_cost_matrix(block, m);
  detail::hungarian_solve(block, m, ws);
  const double tau = residual_tolerance(block);
  double value = 0.0;
  for (std::size_t j = 1; j <= m; ++j) { value += block[(ws.p[j] - 1) * m + (j - 1)]; }
  for (std::size_t r = 0; r < m; ++r) {
    const double ur = ws.u[r + 1];
    double* row = block.data() + r * m;
    for (std::size_t s = 0; s < m; ++s) {
      double res = row[s] - ur - ws.v[s + 1];
      if (res < 0.0) {
        if (res < -tau) { throw CertificateError("negative residual " + std::to_string(res) + " in concentration"); }
        res = 0.0;
      }
      row[s] = res;
    }
  }
  for (std::size_t j = 1; j <= m; ++j) { block[(ws.p[j] - 1) * m + (j - 1)] = 0.0; }
  return value;
}

}  // namespace qaprlt
