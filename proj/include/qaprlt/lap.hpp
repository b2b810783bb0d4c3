/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qaprlt {

/// Optimal solution of a dense m x m linear assignment problem together with
/// a dual certificate. residual[r*m+s] = cost[r*m+s] - u[r] - v[s] >= 0, zero
/// on the assignment, and value = sum(u) + sum(v) = sum_r cost[r*m+assign[r]].
struct LapCertificate {
  std::size_t m = 0;
  double value = 0.0;
  std::vector<int> assign;
  std::vector<double> u;
  std::vector<double> v;
  std::vector<double> residual;
};

/// Raised when a solver cannot produce a sound certificate. This is an
/// internal-consistency defect, never an expected outcome.
class CertificateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Residuals in (-tau, 0) are clamped to zero; anything below -tau is a defect.
double residual_tolerance(std::span<const double> cost);

LapCertificate lap_hungarian(std::span<const double> cost, std::size_t m);

struct AuctionSchedule {
  /// Each phase divides epsilon by this factor.
  double reduction = 4.0;
  /// Scale factor that maps dyadic inputs onto integers.
  double integer_scale = 1048576.0;  // 2^20
};

/// Bertsekas forward auction with epsilon scaling (minimisation form). The
/// terminal assignment is certified exact by a potential repair pass.
LapCertificate lap_auction(std::span<const double> cost, std::size_t m, const AuctionSchedule& schedule = {});

/// Exhaustive optimum over all m! assignments. Refuses m > 10.
double oracle_lap(std::span<const double> cost, std::size_t m);

enum class LapMethod { hungarian, auction };

/// Scratch buffers reused by repeated in-place solves.
struct LapWorkspace {
  std::vector<double> u, v, minv;
  std::vector<int> p, way;
  std::vector<char> used;
};

/// Solves the LAP on `block` (m x m, row-major), overwrites it with its
/// certified residual matrix, and returns the optimum.
double concentrate_block(std::span<double> block, std::size_t m, LapMethod method, LapWorkspace& ws);

}  // namespace qaprlt
