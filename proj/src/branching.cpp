/* SPDX-License-Identifier: Apache-2.0 */

#include <qaprlt/bnb.hpp>

#include <algorithm>
#include <limits>

namespace qaprlt {

Node make_node(const QapInstance& inst, std::vector<Assignment> fixed, double lb)
{
  std::vector<char> fac_used(inst.n, 0), loc_used(inst.n, 0);
  for (const Assignment& a : fixed) {
    if (fac_used[a.facility] || loc_used[a.location]) {
      throw std::invalid_argument("fixed assignments reuse a facility or location");
    }
    fac_used[a.facility] = 1;
    loc_used[a.location] = 1;
  }
  Node node;
  for (std::size_t i = 0; i < inst.n; ++i) {
    if (!fac_used[i]) { node.free_fac.push_back(static_cast<int>(i)); }
    if (!loc_used[i]) { node.free_loc.push_back(static_cast<int>(i)); }
  }
  node.depth = fixed.size();
  node.fixed = std::move(fixed);
  node.lb = lb;
  node.base_lb = 0.0;
  return node;
}

DualState fold_dual(const DualState& parent, std::size_t a, std::size_t b, double& constant)
{
  const std::size_t n = parent.n();
  const std::size_t m = n - 1;
  DualState child(m, parent.level());
  constant = parent.lb + parent.b(a, b);

  // child-local index -> parent index
  std::vector<std::size_t> fac(m), loc(m);
  for (std::size_t x = 0; x < m; ++x) {
    fac[x] = x < a ? x : x + 1;
    loc[x] = x < b ? x : x + 1;
  }

  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t l = 0; l < m; ++l) {
      const std::size_t pk = fac[k], pl = loc[l];
      child.b(k, l) = parent.b(pk, pl) + parent.c(a, b, pk, pl) + parent.c(pk, pl, a, b);
    }
  }

  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t l = 0; l < m; ++l) {
      const std::size_t pk = fac[k], pl = loc[l];
      for (std::size_t r = 0; r < m; ++r) {
        if (r == k) { continue; }
        const std::size_t pr = fac[r];
        for (std::size_t q = 0; q < m; ++q) {
          if (q == l) { continue; }
          const std::size_t pq = loc[q];
          double v = parent.c(pk, pl, pr, pq);
          if (parent.has_d()) {
            // the six logical coefficients of {ab, kl, rq} that involve the
            // fixed pair collapse onto c'(kl,rq) and c'(rq,kl), three each
            v += parent.d(a, b, pk, pl, pr, pq) + parent.d(a, b, pr, pq, pk, pl) + parent.d(pk, pl, pr, pq, a, b);
          }
          child.c(k, l, r, q) = v;
        }
      }
    }
  }

  if (child.has_d() && m >= 3) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t k = i + 1; k < m; ++k) {
        for (std::size_t j = 0; j < m; ++j) {
          for (std::size_t l = 0; l < m; ++l) {
            if (l == j) { continue; }
            std::span<double> dst = child.d_block(i, j, k, l);
            std::size_t e = 0;
            for (std::size_t p = 0; p < m; ++p) {
              if (p == i || p == k) { continue; }
              for (std::size_t q = 0; q < m; ++q) {
                if (q == j || q == l) { continue; }
                dst[e++] = parent.d(fac[i], loc[j], fac[k], loc[l], fac[p], loc[q]);
              }
            }
          }
        }
      }
    }
  }
  return child;
}

void materialize(const QapInstance& inst, Node& node, Level cold_level, std::uint64_t mem_cap)
{
  if (node.dual) { return; }
  if (node.free_count() < 3) { throw std::logic_error("nodes with fewer than 3 free facilities are enumerated"); }
  if (node.warm) {
    double constant = 0.0;
    node.dual = fold_dual(*node.warm->parent, node.warm->facility, node.warm->location, constant);
    node.warm.reset();
    return;
  }
  ReducedProblem rp = reduce(inst, node.fixed);
  node.dual = init_dual(rp, cold_level, mem_cap);
  node.base_lb = static_cast<double>(rp.constant);
  node.lb = std::max(node.lb, node.base_lb);
}

std::vector<Node> branch_children(const QapInstance& inst,
                                  const Node& node,
                                  BranchLine line,
                                  BranchMode mode,
                                  std::shared_ptr<const DualState> state)
{
  const std::size_t m = node.free_count();
  if (m < 2) { throw std::logic_error("cannot branch on a node with fewer than 2 free facilities"); }
  if (line.index < 0 || static_cast<std::size_t>(line.index) >= m) {
    throw std::invalid_argument("branching line out of range");
  }
  if (mode == BranchMode::warm) {
    if (!state || state->n() != m) { throw std::invalid_argument("warm children need the node's tensors"); }
    if (m - 1 < 3) { mode = BranchMode::cold; }
  }

  std::vector<Node> children;
  children.reserve(m);
  for (std::size_t other = 0; other < m; ++other) {
    const std::size_t a = line.kind == LineKind::row ? static_cast<std::size_t>(line.index) : other;
    const std::size_t b = line.kind == LineKind::row ? other : static_cast<std::size_t>(line.index);
    Node child;
    child.fixed = node.fixed;
    child.fixed.push_back({node.free_fac[a], node.free_loc[b]});
    child.free_fac = node.free_fac;
    child.free_fac.erase(child.free_fac.begin() + static_cast<std::ptrdiff_t>(a));
    child.free_loc = node.free_loc;
    child.free_loc.erase(child.free_loc.begin() + static_cast<std::ptrdiff_t>(b));
    child.depth = node.depth + 1;
    if (mode == BranchMode::warm) {
      child.base_lb = node.base_lb + state->lb + state->b(a, b);
      child.lb = std::max(node.lb, child.base_lb);
      child.warm = WarmSource{state, static_cast<int>(a), static_cast<int>(b)};
    } else {
      child.base_lb = static_cast<double>(reduce(inst, child.fixed).constant);
      child.lb = std::max(node.lb, child.base_lb);
    }
    children.push_back(std::move(child));
  }
  return children;
}

double node_completion_cost(const Node& node, std::span<const int> local)
{
  if (!node.dual) { throw std::logic_error("node has no tensors"); }
  return node.base_lb + evaluate_dual(*node.dual, local);
}

namespace {

// Exact minimum over all completions of a node with at most 2 free facilities.
double enumerate_small(const ReducedProblem& rp)
{
  if (rp.n == 0) { return static_cast<double>(rp.constant); }
  if (rp.n == 1) {
    const int one[1] = {0};
    return static_cast<double>(evaluate(rp, one));
  }
  const int id[2] = {0, 1};
  const int sw[2] = {1, 0};
  return static_cast<double>(std::min(evaluate(rp, id), evaluate(rp, sw)));
}

}  // namespace

StrongBranchResult strong_branch_select(const QapInstance& inst,
                                        const Node& node,
                                        cost_t incumbent,
                                        const StrongBranchConfig& cfg)
{
  const std::size_t m = node.free_count();
  if (m < 3) { throw std::logic_error("strong branching needs at least 3 free facilities"); }
  StrongBranchResult res;
  res.m = m;
  res.estimates.assign(m * m, 0.0);
  res.prune.assign(m * m, 0);

  AscentConfig ascent;
  ascent.k = cfg.k;
  ascent.max_iters = std::max<std::size_t>(1, cfg.sb_iters);
  const double threshold = prune_threshold(incumbent);

  std::vector<Assignment> fixed = node.fixed;
  fixed.emplace_back();
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      fixed.back() = Assignment{node.free_fac[a], node.free_loc[b]};
      ReducedProblem rp = reduce(inst, fixed);
      double estimate = static_cast<double>(rp.constant);
      if (rp.n < 3) {
        estimate = enumerate_small(rp);
      } else if (estimate <= threshold) {
        DualState s = init_dual(rp, Level::rlt1);
        const double local_ub = threshold - estimate;
        if (local_ub > 0.0) {
          dual_ascent_rlt1(s, local_ub, ascent);
        }
        estimate += s.lb;
      }
      estimate = std::max(estimate, node.lb);
      res.estimates[a * m + b] = estimate;
      res.prune[a * m + b] = estimate > threshold ? 1 : 0;
    }
  }

  res.row_scores.assign(m, std::numeric_limits<double>::infinity());
  res.col_scores.assign(m, std::numeric_limits<double>::infinity());
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      res.row_scores[a] = std::min(res.row_scores[a], res.estimates[a * m + b]);
      res.col_scores[b] = std::min(res.col_scores[b], res.estimates[a * m + b]);
    }
  }
  // local indices ascend with original indices, so the first maximum is the lowest
  const auto best_row = static_cast<std::size_t>(
    std::distance(res.row_scores.begin(), std::max_element(res.row_scores.begin(), res.row_scores.end())));
  const auto best_col = static_cast<std::size_t>(
    std::distance(res.col_scores.begin(), std::max_element(res.col_scores.begin(), res.col_scores.end())));
  if (res.row_scores[best_row] >= res.col_scores[best_col]) {
    res.line = BranchLine{LineKind::row, static_cast<int>(best_row)};
  } else {
    res.line = BranchLine{LineKind::column, static_cast<int>(best_col)};
  }
  return res;
}

}  // namespace qaprlt
