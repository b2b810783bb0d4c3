/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <qaprlt/lap.hpp>

#include <cmath>
#include <string>

namespace qaprlt::detail {

inline void check_cost_matrix(std::span<const double> cost, std::size_t m)
{
  if (m == 0) { throw std::invalid_argument("assignment matrix must be at least 1 x 1"); }
  if (cost.size() != m * m) { throw std::invalid_argument("assignment matrix must be m x m"); }
  for (std::size_t e = 0; e < cost.size(); ++e) {
    if (!std::isfinite(cost[e]) || cost[e] < 0.0) {
      throw std::invalid_argument("assignment cost at (" + std::to_string(e / m) + "," + std::to_string(e % m) +
                                  ") must be finite and nonnegative");
    }
  }
}

/// Builds R = cost - u - v with tau-clamping, zeroes the assigned cells and
/// fills the remaining certificate fields. Throws CertificateError.
LapCertificate make_certificate(std::span<const double> cost,
                                std::size_t m,
                                std::vector<int> assign,
                                std::vector<double> u,
                                std::vector<double> v);

/// Hungarian solve into ws.u/ws.v/ws.p (1-based, e-maxx layout).
void hungarian_solve(std::span<const double> cost, std::size_t m, LapWorkspace& ws);

}  // namespace qaprlt::detail
