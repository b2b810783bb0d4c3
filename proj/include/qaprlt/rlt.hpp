/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <qaprlt/instance.hpp>
#include <qaprlt/lap.hpp>
#include <qaprlt/reduced.hpp>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qaprlt {

enum class Level { rlt1 = 1, rlt2 = 2 };

/// Reduced-cost tensors of the level-1/level-2 dual plus the accumulated bound.
///
/// Layout:
///  - B: n x n, b(i,j).
///  - C: one (n-1) x (n-1) block per ordered (i,j); block rows are facilities
///    k != i, columns locations l != j, both in ascending order.
///  - D (level 2 only): one (n-2) x (n-2) block per (i,j,k,l) with i < k and
///    j != l; rows p not in {i,k}, columns q not in {j,l}. The block for
///    (k,l,i,j) is the same storage, so a stored entry stands for two logical
///    coefficients.
class DualState {
 public:
  DualState() = default;
  DualState(std::size_t n, Level level);

  std::size_t n() const { return n_; }
  Level level() const { return level_; }
  bool has_d() const { return level_ == Level::rlt2; }

  double lb = 0.0;

  std::span<double> b_matrix() { return b_; }
  std::span<const double> b_matrix() const { return b_; }
  double& b(std::size_t i, std::size_t j) { return b_[i * n_ + j]; }
  double b(std::size_t i, std::size_t j) const { return b_[i * n_ + j]; }

  std::size_t c_block_size() const { return (n_ - 1) * (n_ - 1); }
  std::span<double> c_block(std::size_t i, std::size_t j)
  {
    return {c_.data() + (i * n_ + j) * c_block_size(), c_block_size()};
  }
  std::span<const double> c_block(std::size_t i, std::size_t j) const
  {
    return {c_.data() + (i * n_ + j) * c_block_size(), c_block_size()};
  }
  double& c(std::size_t i, std::size_t j, std::size_t k, std::size_t l) { return c_[c_index(i, j, k, l)]; }
  double c(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const { return c_[c_index(i, j, k, l)]; }
  std::span<double> c_all() { return c_; }
  std::span<const double> c_all() const { return c_; }

  std::size_t d_block_size() const { return (n_ - 2) * (n_ - 2); }
  std::size_t d_block_count() const { return n_ * (n_ - 1) / 2 * n_ * (n_ - 1); }
  /// Stored block for (i,j,k,l); requires i < k and j != l.
  std::span<double> d_block(std::size_t i, std::size_t j, std::size_t k, std::size_t l)
  {
    return {d_.data() + d_block_index(i, j, k, l) * d_block_size(), d_block_size()};
  }
  std::span<const double> d_block(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const
  {
    return {d_.data() + d_block_index(i, j, k, l) * d_block_size(), d_block_size()};
  }
  /// Stored entry behind the logical coefficient d_{(ij)(kl)(pq)}; the first
  /// two pairs may come in either order.
  double& d(std::size_t i, std::size_t j, std::size_t k, std::size_t l, std::size_t p, std::size_t q)
  {
    return d_[d_index(i, j, k, l, p, q)];
  }
  double d(std::size_t i, std::size_t j, std::size_t k, std::size_t l, std::size_t p, std::size_t q) const
  {
    return d_[d_index(i, j, k, l, p, q)];
  }
  std::span<double> d_all() { return d_; }
  std::span<const double> d_all() const { return d_; }

  std::size_t d_block_index(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const
  {
    const std::size_t pair = i * (2 * n_ - i - 1) / 2 + (k - i - 1);
    return pair * (n_ * (n_ - 1)) + j * (n_ - 1) + (l - (l > j));
  }

  std::size_t bytes() const { return 8 * (b_.size() + c_.size() + d_.size()); }

 private:
  std::size_t c_index(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const
  {
    return (i * n_ + j) * c_block_size() + (k - (k > i)) * (n_ - 1) + (l - (l > j));
  }
  std::size_t d_index(std::size_t i, std::size_t j, std::size_t k, std::size_t l, std::size_t p, std::size_t q) const
  {
    if (k < i) {
      std::swap(i, k);
      std::swap(j, l);
    }
    const std::size_t row = p - (p > i) - (p > k);
    const std::size_t col = q - (q > j) - (q > l);
    return d_block_index(i, j, k, l) * d_block_size() + row * (n_ - 2) + col;
  }

  std::size_t n_ = 0;
  Level level_ = Level::rlt2;
  std::vector<double> b_;
  std::vector<double> c_;
  std::vector<double> d_;
};

/// Raised when the tensors for a problem would exceed the configured memory cap.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const MemoryEstimate& est, std::uint64_t cap)
    : std::runtime_error("reduced-cost tensors need an estimated " + std::to_string(est.bytes_total) +
                         " bytes, above the cap of " + std::to_string(cap) + " bytes"),
      estimate(est),
      cap_bytes(cap)
  {
  }
  MemoryEstimate estimate;
  std::uint64_t cap_bytes;
};

/// lb = 0, b = linear cost, c_ijkl = f_ik d_jl, D = 0. mem_cap = 0 means no cap.
DualState init_dual(const QapInstance& inst, Level level = Level::rlt2, std::uint64_t mem_cap = 0);
DualState init_dual(const ReducedProblem& rp, Level level = Level::rlt2, std::uint64_t mem_cap = 0);

/// lb + sum b + sum c + sum over ordered distinct triples of logical d.
double evaluate_dual(const DualState& s, std::span<const int> perm);

/// Optional intra-operation parallelism over disjoint blocks.
struct ExecPolicy {
  unsigned threads = 1;
  LapMethod lap = LapMethod::hungarian;
};

void spread_b_to_c(DualState& s, const ExecPolicy& exec = {});
void spread_c_to_d(DualState& s, const ExecPolicy& exec = {});
void transfer_complements_c(DualState& s, const ExecPolicy& exec = {});
void transfer_complements_d(DualState& s, const ExecPolicy& exec = {});
void concentrate_d_to_c(DualState& s, const ExecPolicy& exec = {});
void concentrate_c_to_b(DualState& s, const ExecPolicy& exec = {});
/// Returns the amount moved into lb.
double concentrate_b_to_lb(DualState& s, const ExecPolicy& exec = {});

struct AscentConfig {
  double k = 1e-5;             // minimal progress, as a fraction of ub
  std::size_t max_iters = 1000;
  double tau = 1e-9;
  ExecPolicy exec;

  /// Throws std::invalid_argument when k is outside [1e-7, 1] or max_iters == 0.
  void validate() const;
};

enum class AscentStatus { converged, pruned, iter_capped };
std::string_view to_string(AscentStatus s);

struct AscentResult {
  double lb = 0.0;
  std::size_t iterations = 0;
  AscentStatus status = AscentStatus::converged;
  std::vector<double> trajectory;  // lb after each iteration
};

/// Full level-2 loop: spread B->C, C->D, transfer D, concentrate D->C,
/// transfer C, concentrate C->B, concentrate B->lb. Stops when progress / ub
/// drops below k, when lb >= ub, or at max_iters.
AscentResult dual_ascent_rlt2(DualState& s, double ub, const AscentConfig& cfg);
/// Level-1 loop: the same without any D operation.
AscentResult dual_ascent_rlt1(DualState& s, double ub, const AscentConfig& cfg);

}  // namespace qaprlt
