/* SPDX-License-Identifier: Apache-2.0 */

#include <qaprlt/rlt.hpp>

namespace qaprlt {

void AscentConfig::validate() const
{
  if (!(k >= 1e-7 && k <= 1.0)) { throw std::invalid_argument("progress limit k must lie in [1e-7, 1]"); }
  if (max_iters < 1) { throw std::invalid_argument("max_iters must be at least 1"); }
  if (!(tau > 0.0)) { throw std::invalid_argument("tau must be positive"); }
}

std::string_view to_string(AscentStatus s)
{
  switch (s) {
    case AscentStatus::converged: return "converged";
    case AscentStatus::pruned: return "pruned";
    case AscentStatus::iter_capped: return "iter_capped";
  }
  return "unknown";
}

namespace {

template <typename Body>
AscentResult run_loop(DualState& s, double ub, const AscentConfig& cfg, Body&& body)
{
  cfg.validate();
  if (!(ub > 0.0)) { throw std::invalid_argument("dual ascent needs ub > 0"); }
  AscentResult res;
  double progress = 1.0;
  while (progress >= cfg.k && s.lb < ub && res.iterations < cfg.max_iters) {
    const double gained = body();
    ++res.iterations;
    res.trajectory.push_back(s.lb);
    progress = gained / ub;
  }
  res.lb = s.lb;
  if (s.lb >= ub) {
    res.status = AscentStatus::pruned;
  } else if (progress < cfg.k) {
    res.status = AscentStatus::converged;
  } else {
    res.status = AscentStatus::iter_capped;
  }
  return res;
}

}  // namespace

AscentResult dual_ascent_rlt2(DualState& s, double ub, const AscentConfig& cfg)
{
  if (!s.has_d()) { throw std::logic_error("level-2 ascent needs level-2 tensors"); }
  const ExecPolicy& ex = cfg.exec;
  return run_loop(s, ub, cfg, [&] {
    spread_b_to_c(s, ex);
    spread_c_to_d(s, ex);
    transfer_complements_d(s, ex);
    concentrate_d_to_c(s, ex);
    transfer_complements_c(s, ex);
    concentrate_c_to_b(s, ex);
    return concentrate_b_to_lb(s, ex);
  });
}

AscentResult dual_ascent_rlt1(DualState& s, double ub, const AscentConfig& cfg)
{
  const ExecPolicy& ex = cfg.exec;
  return run_loop(s, ub, cfg, [&] {
    spread_b_to_c(s, ex);
    transfer_complements_c(s, ex);
    concentrate_c_to_b(s, ex);
    return concentrate_b_to_lb(s, ex);
  });
}

}  // namespace qaprlt
