/* SPDX-License-Identifier: Apache-2.0 */

#include <qaprlt/rlt.hpp>

#include "parallel.hpp"

#include <algorithm>

namespace qaprlt {

DualState::DualState(std::size_t n, Level level) : n_(n), level_(level)
{
  if (n < 3) { throw std::invalid_argument("reduced-cost tensors need n >= 3"); }
  b_.assign(n * n, 0.0);
  c_.assign(n * n * (n - 1) * (n - 1), 0.0);
  if (level == Level::rlt2) { d_.assign(d_block_count() * d_block_size(), 0.0); }
}

namespace {

void check_capacity(std::size_t n, Level level, std::uint64_t mem_cap)
{
  if (mem_cap == 0) { return; }
  const MemoryEstimate est = level == Level::rlt2 ? estimate_memory(n) : estimate_memory_level1(n);
  if (est.bytes_total > mem_cap) { throw CapacityError(est, mem_cap); }
}

template <typename LinearFn, typename FlowFn, typename DistFn>
DualState build(std::size_t n, Level level, LinearFn lin, FlowFn f, DistFn d)
{
  DualState s(n, level);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      s.b(i, j) = static_cast<double>(lin(i, j));
      std::span<double> block = s.c_block(i, j);
      std::size_t e = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i) { continue; }
        const auto fik = f(i, k);
        for (std::size_t l = 0; l < n; ++l) {
          if (l == j) { continue; }
          block[e++] = static_cast<double>(fik * d(j, l));
        }
      }
    }
  }
  return s;
}

void require_d(const DualState& s)
{
  if (!s.has_d()) { throw std::logic_error("operation needs level-2 tensors"); }
}

}  // namespace

DualState init_dual(const QapInstance& inst, Level level, std::uint64_t mem_cap)
{
  if (inst.n < 3) { throw std::invalid_argument("dual ascent needs n >= 3"); }
  check_capacity(inst.n, level, mem_cap);
  return build(
    inst.n,
    level,
    [&](std::size_t i, std::size_t j) { return inst.f(i, i) * inst.d(j, j); },
    [&](std::size_t i, std::size_t k) { return inst.f(i, k); },
    [&](std::size_t j, std::size_t l) { return inst.d(j, l); });
}

DualState init_dual(const ReducedProblem& rp, Level level, std::uint64_t mem_cap)
{
  if (rp.n < 3) { throw std::invalid_argument("dual ascent needs n >= 3"); }
  check_capacity(rp.n, level, mem_cap);
  DualState s = build(
    rp.n,
    level,
    [&](std::size_t i, std::size_t j) { return rp.lin(i, j); },
    [&](std::size_t i, std::size_t k) { return rp.f(i, k); },
    [&](std::size_t j, std::size_t l) { return rp.d(j, l); });
  return s;
}

double evaluate_dual(const DualState& s, std::span<const int> perm)
{
  const std::size_t n = s.n();
  if (perm.size() != n) { throw std::invalid_argument("permutation size mismatch"); }
  double total = s.lb;
  for (std::size_t i = 0; i < n; ++i) {
    const auto pi = static_cast<std::size_t>(perm[i]);
    total += s.b(i, pi);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) { continue; }
      const auto pk = static_cast<std::size_t>(perm[k]);
      total += s.c(i, pi, k, pk);
      if (!s.has_d()) { continue; }
      for (std::size_t m = 0; m < n; ++m) {
        if (m == i || m == k) { continue; }
        total += s.d(i, pi, k, pk, m, static_cast<std::size_t>(perm[m]));
      }
    }
  }
  return total;
}

void spread_b_to_c(DualState& s, const ExecPolicy& exec)
{
  const std::size_t n = s.n();
  const double share = 1.0 / static_cast<double>(n - 1);
  detail::parallel_for(n * n, exec.threads, [&](unsigned, std::size_t begin, std::size_t end) {
    for (std::size_t ij = begin; ij < end; ++ij) {
      const std::size_t i = ij / n, j = ij % n;
      const double inc = s.b(i, j) * share;
      if (inc == 0.0) { continue; }
      for (double& c : s.c_block(i, j)) { c += inc; }
      s.b(i, j) = 0.0;
    }
  });
}

void spread_c_to_d(DualState& s, const ExecPolicy& exec)
{
  require_d(s);
  const std::size_t n = s.n();
  const double share = 1.0 / (2.0 * static_cast<double>(n - 2));
  // one task per facility i, covering every stored block with first facility i
  detail::parallel_for(n, exec.threads, [&](unsigned, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t k = i + 1; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
          for (std::size_t l = 0; l < n; ++l) {
            if (l == j) { continue; }
            const double inc = (s.c(i, j, k, l) + s.c(k, l, i, j)) * share;
            if (inc == 0.0) { continue; }
            for (double& d : s.d_block(i, j, k, l)) { d += inc; }
          }
        }
      }
    }
  });
  std::ranges::fill(s.c_all(), 0.0);
}

void transfer_complements_c(DualState& s, const ExecPolicy& exec)
{
  const std::size_t n = s.n();
  detail::parallel_for(n, exec.threads, [&](unsigned, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t k = i + 1; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
          for (std::size_t l = 0; l < n; ++l) {
            if (l == j) { continue; }
            double& a = s.c(i, j, k, l);
            double& b = s.c(k, l, i, j);
            const double mean = 0.5 * (a + b);
            a = mean;
            b = mean;
          }
        }
      }
    }
  });
}

void transfer_complements_d(DualState& s, const ExecPolicy& exec)
{
  require_d(s);
  const std::size_t n = s.n();
  detail::parallel_for(n, exec.threads, [&](unsigned, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t k = i + 1; k < n; ++k) {
        for (std::size_t m = k + 1; m < n; ++m) {
          for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t l = 0; l < n; ++l) {
              if (l == j) { continue; }
              for (std::size_t q = 0; q < n; ++q) {
                if (q == j || q == l) { continue; }
                double& x = s.d(i, j, k, l, m, q);
                double& y = s.d(i, j, m, q, k, l);
                double& z = s.d(k, l, m, q, i, j);
                if (x == y && y == z) { continue; }
                const double mean = (x + y + z) / 3.0;
                x = mean;
                y = mean;
                z = mean;
              }
            }
          }
        }
      }
    }
  });
}

void concentrate_d_to_c(DualState& s, const ExecPolicy& exec)
{
  require_d(s);
  const std::size_t n = s.n();
  const std::size_t m = n - 2;
  // Each stored block credits exactly the two C entries (ij,kl) and (kl,ij),
  // and no other block credits them, so workers never write the same cell.
  detail::parallel_for(n, exec.threads, [&](unsigned, std::size_t begin, std::size_t end) {
    LapWorkspace ws;
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t k = i + 1; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
          for (std::size_t l = 0; l < n; ++l) {
            if (l == j) { continue; }
            std::span<double> block = s.d_block(i, j, k, l);
            if (std::ranges::all_of(block, [](double v) { return v == 0.0; })) { continue; }
            const double value = concentrate_block(block, m, exec.lap, ws);
            s.c(i, j, k, l) += value;
            s.c(k, l, i, j) += value;
          }
        }
      }
    }
  });
}

void concentrate_c_to_b(DualState& s, const ExecPolicy& exec)
{
  const std::size_t n = s.n();
  detail::parallel_for(n * n, exec.threads, [&](unsigned, std::size_t begin, std::size_t end) {
    LapWorkspace ws;
    for (std::size_t ij = begin; ij < end; ++ij) {
      const std::size_t i = ij / n, j = ij % n;
      std::span<double> block = s.c_block(i, j);
      if (std::ranges::all_of(block, [](double v) { return v == 0.0; })) { continue; }
      s.b(i, j) += concentrate_block(block, n - 1, exec.lap, ws);
    }
  });
}

double concentrate_b_to_lb(DualState& s, const ExecPolicy& exec)
{
  LapWorkspace ws;
  const double value = concentrate_block(s.b_matrix(), s.n(), exec.lap, ws);
  s.lb += value;
  return value;
}

}  // namespace qaprlt
