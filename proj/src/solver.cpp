/* SPDX-License-Identifier: Apache-2.0 */

#include <qaprlt/bnb.hpp>
#include <qaprlt/checkpoint.hpp>

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <limits>
#include <mutex>
#include <thread>

namespace qaprlt {

std::string_view to_string(SolveStatus s)
{
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::ub_only: return "ub_only";
    case SolveStatus::capped: return "capped";
  }
  return "unknown";
}

Node make_root(const QapInstance& inst, const Incumbent& ub, const AscentConfig& cfg, std::uint64_t mem_cap)
{
  Node root = make_node(inst, {});
  materialize(inst, root, Level::rlt2, mem_cap);
  const double local_ub = prune_threshold(ub.value) - root.base_lb;
  if (local_ub > 0.0) { dual_ascent_rlt2(*root.dual, local_ub, cfg); }
  root.lb = std::max(root.lb, root.base_lb + root.dual->lb);
  return root;
}

namespace {

using clock_type = std::chrono::steady_clock;

class IncumbentStore {
 public:
  IncumbentStore(const QapInstance& inst, Incumbent init)
    : inst_(inst), best_(std::move(init)), value_(best_.value)
  {
  }

  cost_t value() const { return value_.load(std::memory_order_acquire); }

  // Every candidate is re-evaluated; the stored value only ever decreases.
  bool offer(const Permutation& p)
  {
    const cost_t v = evaluate(inst_, p);
    if (v >= value()) { return false; }
    std::lock_guard lock(mu_);
    if (v >= best_.value) { return false; }
    best_.perm = p;
    best_.value = v;
    value_.store(v, std::memory_order_release);
    return true;
  }

  Incumbent snapshot() const
  {
    std::lock_guard lock(mu_);
    return best_;
  }

 private:
  const QapInstance& inst_;
  mutable std::mutex mu_;
  Incumbent best_;
  std::atomic<cost_t> value_;
};

class Search {
 public:
  Search(const QapInstance& inst, const SolveConfig& cfg, Incumbent init, std::vector<Node> open,
         clock_type::time_point start)
    : inst_(inst),
      cfg_(cfg),
      workers_(std::max(1u, cfg.workers)),
      incumbent_(inst, std::move(init)),
      stacks_(workers_),
      inflight_(workers_, std::numeric_limits<double>::quiet_NaN())
  {
    for (Node& node : open) { stacks_[0].push_back(std::move(node)); }
    start_ = start;
    last_checkpoint_ = clock_type::now();
  }

  void set_progress(std::size_t expanded, std::size_t fathomed, std::size_t max_depth, double elapsed, double root_lb,
                    bool root_done)
  {
    expanded_ = expanded;
    fathomed_ = fathomed;
    max_depth_ = max_depth;
    elapsed_before_ = elapsed;
    root_lb_ = root_lb;
    root_done_ = root_done;
  }

  void run()
  {
    {
      std::lock_guard lock(mu_);
      record_locked();
    }
    if (workers_ == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers_; ++w) { pool.emplace_back([this, w] { work(w); }); }
    }
    if (failure_) { std::rethrow_exception(failure_); }
    std::lock_guard lock(mu_);
    record_locked();
  }

  SolveReport report() const
  {
    SolveReport r;
    r.instance_name = inst_.name;
    r.n = inst_.n;
    Incumbent inc = incumbent_.snapshot();
    r.value = inc.value;
    r.perm = inc.perm;
    r.root_lb = root_lb_;
    r.root_iterations = root_iterations_;
    r.nodes_expanded = expanded_;
    r.nodes_fathomed = fathomed_;
    r.max_depth = max_depth_;
    r.wall_seconds = elapsed();
    r.peak_tensor_bytes = peak_estimate();
    r.trajectory = trajectory_;
    std::size_t open = 0;
    double glb = static_cast<double>(inc.value);
    for (const auto& stack : stacks_) {
      open += stack.size();
      for (const Node& node : stack) { glb = std::min(glb, node.lb); }
    }
    r.open_nodes = open;
    r.global_lb = glb;
    r.status = open == 0 ? SolveStatus::optimal : SolveStatus::capped;
    return r;
  }

 private:
  double elapsed() const
  {
    return elapsed_before_ + std::chrono::duration<double>(clock_type::now() - start_).count();
  }

  static std::uint64_t tensor_bytes(std::size_t m, bool with_d)
  {
    if (m < 3) { return 0; }
    const MemoryEstimate e = with_d ? estimate_memory(m) : estimate_memory_level1(m);
    return 8 * (e.entries_B + e.entries_C + e.entries_D);
  }

  // Root tensors plus, per worker, one shared parent per warm level and the
  // node being bounded.
  std::uint64_t peak_estimate() const
  {
    const std::size_t n = inst_.n;
    std::uint64_t per_worker = 0;
    for (std::size_t depth = 1; depth < cfg_.warm_depth && depth < n; ++depth) {
      per_worker += tensor_bytes(n - depth, true);
    }
    if (cfg_.warm_depth < n) { per_worker += tensor_bytes(n - cfg_.warm_depth, false); }
    return root_bytes_ + static_cast<std::uint64_t>(workers_) * std::max<std::uint64_t>(per_worker, node_bytes_);
  }

  // Valid lower bound on the optimum; caller holds mu_.
  double global_lb_locked() const
  {
    double glb = static_cast<double>(incumbent_.value());
    for (const auto& stack : stacks_) {
      for (const Node& node : stack) { glb = std::min(glb, node.lb); }
    }
    for (double lb : inflight_) {
      if (lb == lb) { glb = std::min(glb, lb); }
    }
    return glb;
  }

  void record_locked() { trajectory_.push_back({elapsed(), global_lb_locked(), incumbent_.value()}); }

  Checkpoint snapshot_locked() const
  {
    Checkpoint cp;
    cp.instance_digest = instance_digest(inst_);
    cp.n = inst_.n;
    Incumbent inc = incumbent_.snapshot();
    cp.incumbent_value = inc.value;
    if (inc.perm.size() == inst_.n) { cp.incumbent_perm = inc.perm; }
    for (const auto& stack : stacks_) {
      for (const Node& node : stack) { cp.open.push_back(OpenNode{node.fixed, node.lb}); }
    }
    cp.nodes_expanded = expanded_;
    cp.nodes_fathomed = fathomed_;
    cp.max_depth = max_depth_;
    cp.elapsed_seconds = elapsed();
    cp.root_lb = root_lb_;
    cp.root_done = root_done_;
    return cp;
  }

  bool should_stop_locked() const
  {
    if (cfg_.interrupt && cfg_.interrupt->load()) { return true; }
    if (cfg_.time_cap > 0.0 && elapsed() - elapsed_before_ >= cfg_.time_cap) { return true; }
    if (cfg_.node_limit > 0 && expanded_ >= cfg_.node_limit) { return true; }
    return failure_ != nullptr;
  }

  // Blocks until a node is available. Returns false when the search is over.
  bool pop(unsigned id, Node& out)
  {
    std::unique_lock lock(mu_);
    for (;;) {
      if (!stop_ && should_stop_locked()) { stop_ = true; }
      const bool have_path = !cfg_.checkpoint_path.empty();
      if (have_path && !stop_ && !checkpoint_due_ &&
          std::chrono::duration<double>(clock_type::now() - last_checkpoint_).count() >= cfg_.checkpoint_interval) {
        checkpoint_due_ = true;
      }
      if (busy_ == 0 && have_path && (checkpoint_due_ || ((stop_ || done_) && !final_saved_)) && failure_ == nullptr) {
        try {
          write_checkpoint_file(cfg_.checkpoint_path, snapshot_locked());
        } catch (...) {
          failure_ = std::current_exception();
          stop_ = true;
          final_saved_ = true;
        }
        last_checkpoint_ = clock_type::now();
        checkpoint_due_ = false;
        if (stop_ || done_) { final_saved_ = true; }
        cv_.notify_all();
      }
      if (stop_ || done_) {
        if (busy_ == 0) {
          cv_.notify_all();
          return false;
        }
        cv_.wait_for(lock, std::chrono::milliseconds(50));
        continue;
      }
      if (!checkpoint_due_) {
        if (!stacks_[id].empty()) {
          out = std::move(stacks_[id].back());
          stacks_[id].pop_back();
          take_locked(id, out);
          return true;
        }
        // steal the shallowest open node; ties go to the lowest worker id
        int donor = -1;
        for (unsigned w = 0; w < workers_; ++w) {
          if (stacks_[w].empty()) { continue; }
          if (donor < 0 || stacks_[w].front().depth < stacks_[donor].front().depth) { donor = static_cast<int>(w); }
        }
        if (donor >= 0) {
          out = std::move(stacks_[donor].front());
          stacks_[donor].pop_front();
          take_locked(id, out);
          return true;
        }
        if (busy_ == 0) {
          // one more pass so a finished search leaves an empty checkpoint behind
          done_ = true;
          continue;
        }
      }
      cv_.wait_for(lock, std::chrono::milliseconds(50));
    }
  }

  void take_locked(unsigned id, const Node& node)
  {
    ++busy_;
    inflight_[id] = node.lb;
  }

  void finish(unsigned id, std::vector<Node> children, bool expanded, bool fathomed)
  {
    std::lock_guard lock(mu_);
    --busy_;
    inflight_[id] = std::numeric_limits<double>::quiet_NaN();
    if (expanded) {
      ++expanded_;
      if (expanded_ % 64 == 0) { record_locked(); }
    }
    if (fathomed) { ++fathomed_; }
    for (Node& child : children) {
      max_depth_ = std::max(max_depth_, child.depth);
      stacks_[id].push_back(std::move(child));
    }
    cv_.notify_all();
  }

  void offer(const Permutation& p)
  {
    if (incumbent_.offer(p)) {
      std::lock_guard lock(mu_);
      record_locked();
    }
  }

  void work(unsigned id)
  {
    Node node;
    while (pop(id, node)) {
      try {
        process(id, std::move(node));
      } catch (...) {
        std::lock_guard lock(mu_);
        if (!failure_) { failure_ = std::current_exception(); }
        --busy_;
        inflight_[id] = std::numeric_limits<double>::quiet_NaN();
        cv_.notify_all();
      }
      node = Node{};
    }
  }

  void enumerate_leaf(const Node& node)
  {
    const ReducedProblem rp = reduce(inst_, node.fixed);
    std::vector<int> local(rp.n);
    for (std::size_t i = 0; i < rp.n; ++i) { local[i] = static_cast<int>(i); }
    do {
      offer(complete(inst_, node.fixed, rp, local));
    } while (std::next_permutation(local.begin(), local.end()));
  }

  void process(unsigned id, Node node)
  {
    cost_t inc = incumbent_.value();
    if (prunable(node.lb, inc)) {
      finish(id, {}, false, true);
      return;
    }
    if (node.free_count() <= 2) {
      enumerate_leaf(node);
      finish(id, {}, false, true);
      return;
    }

    const bool is_root = node.depth == 0 && !node.warm;
    // a cold node above the warm depth only arises from a resume; give it what a warm node would have
    const bool shallow = node.depth < cfg_.warm_depth;
    materialize(inst_, node, is_root || shallow ? Level::rlt2 : Level::rlt1, is_root ? cfg_.mem_cap : 0);
    const std::uint64_t bytes = node.dual->bytes();
    if (is_root) {
      root_bytes_ = bytes;
    } else {
      std::uint64_t seen = node_bytes_.load();
      while (bytes > seen && !node_bytes_.compare_exchange_weak(seen, bytes)) {}
    }

    const double local_ub = prune_threshold(inc) - node.base_lb;
    if (local_ub > 0.0) {
      const AscentConfig& ac = is_root ? cfg_.root_ascent : cfg_.node_ascent;
      AscentResult res = node.dual->has_d() ? dual_ascent_rlt2(*node.dual, local_ub, ac)
                                            : dual_ascent_rlt1(*node.dual, local_ub, ac);
      if (is_root) { root_iterations_ = res.iterations; }
    }
    node.lb = std::max(node.lb, node.base_lb + node.dual->lb);
    if (is_root) {
      root_lb_ = node.lb;
      root_done_ = true;
    }
    inc = incumbent_.value();
    if (prunable(node.lb, inc)) {
      finish(id, {}, false, true);
      return;
    }

    StrongBranchResult sb = strong_branch_select(inst_, node, inc, cfg_.strong_branch);
    // resumed nodes come back cold with level-1 tensors, which cannot seed warm children
    const BranchMode mode =
      node.depth + 1 < cfg_.warm_depth && node.dual->has_d() ? BranchMode::warm : BranchMode::cold;
    std::shared_ptr<const DualState> state;
    if (mode == BranchMode::warm) { state = std::make_shared<const DualState>(std::move(*node.dual)); }
    node.dual.reset();

    std::vector<Node> children = branch_children(inst_, node, sb.line, mode, state);
    std::vector<Node> kept;
    kept.reserve(children.size());
    const std::size_t m = sb.m;
    for (std::size_t other = 0; other < children.size(); ++other) {
      const std::size_t a = sb.line.kind == LineKind::row ? static_cast<std::size_t>(sb.line.index) : other;
      const std::size_t b = sb.line.kind == LineKind::row ? other : static_cast<std::size_t>(sb.line.index);
      if (sb.prune[a * m + b]) { continue; }
      Node& child = children[other];
      child.lb = std::max(child.lb, sb.estimates[a * m + b]);
      kept.push_back(std::move(child));
    }
    // most promising child ends up on top of the stack
    std::stable_sort(kept.begin(), kept.end(), [](const Node& x, const Node& y) { return x.lb > y.lb; });
    finish(id, std::move(kept), true, false);
  }

  const QapInstance& inst_;
  const SolveConfig& cfg_;
  const unsigned workers_;
  IncumbentStore incumbent_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::vector<std::deque<Node>> stacks_;
  std::vector<double> inflight_;
  unsigned busy_ = 0;
  bool stop_ = false;
  bool done_ = false;
  bool checkpoint_due_ = false;
  bool final_saved_ = false;
  std::exception_ptr failure_;

  std::size_t expanded_ = 0;
  std::size_t fathomed_ = 0;
  std::size_t max_depth_ = 0;
  double elapsed_before_ = 0.0;
  double root_lb_ = 0.0;
  std::size_t root_iterations_ = 0;
  bool root_done_ = false;
  std::uint64_t root_bytes_ = 0;
  std::atomic<std::uint64_t> node_bytes_{0};
  std::vector<TrajectoryPoint> trajectory_;
  clock_type::time_point start_;
  clock_type::time_point last_checkpoint_;
};

}  // namespace

SolveReport solve_bnb(const QapInstance& inst, const SolveConfig& cfg)
{
  const auto start = std::chrono::steady_clock::now();
  inst.validate();
  cfg.root_ascent.validate();
  cfg.node_ascent.validate();

  Incumbent init;
  std::vector<Node> open;
  std::optional<Checkpoint> resumed;
  if (cfg.resume_path) {
    resumed = read_checkpoint_file(*cfg.resume_path, inst);
    init.value = resumed->incumbent_value;
    if (resumed->incumbent_perm) { init.perm = *resumed->incumbent_perm; }
    for (const OpenNode& on : resumed->open) { open.push_back(make_node(inst, on.fixed, on.lb)); }
    // children are pushed shallow-to-deep per worker; keep that order for LIFO
  } else {
    if (inst.n >= 3 && cfg.mem_cap > 0) {
      const MemoryEstimate est = estimate_memory(inst.n);
      if (est.bytes_total > cfg.mem_cap) { throw CapacityError(est, cfg.mem_cap); }
    }
    if (cfg.ub_override) {
      // only solutions at or below the supplied bound are of interest
      init.value = *cfg.ub_override + 1;
    } else {
      HeuristicResult h = heuristic_ub(inst, cfg.heuristic);
      init.perm = std::move(h.perm);
      init.value = h.value;
    }
    open.push_back(make_node(inst, {}));
  }

  Search search(inst, cfg, init, std::move(open), start);
  if (resumed) {
    search.set_progress(resumed->nodes_expanded, resumed->nodes_fathomed, resumed->max_depth,
                        resumed->elapsed_seconds, resumed->root_lb, resumed->root_done);
  }
  search.run();
  SolveReport report = search.report();
  report.resumed = resumed.has_value();
  report.k = cfg.root_ascent.k;
  report.workers = std::max(1u, cfg.workers);
  report.seed = cfg.heuristic.rng_seed;
  report.sb_iters = cfg.strong_branch.sb_iters;
  report.warm_depth = cfg.warm_depth;

  if (report.perm.size() != inst.n) {
    // nothing at or below the supplied bound was found (or the run stopped
    // first); fall back to the heuristic so the report stays self-certifying
    HeuristicResult h = heuristic_ub(inst, cfg.heuristic);
    if (report.status == SolveStatus::optimal) {
      report.status = SolveStatus::ub_only;
      report.global_lb = std::max(report.global_lb, static_cast<double>(report.value));
    }
    report.perm = std::move(h.perm);
    report.value = h.value;
  }
  if (report.status == SolveStatus::optimal) { report.global_lb = static_cast<double>(report.value); }
  return report;
}

}  // namespace qaprlt
