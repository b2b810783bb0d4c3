/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <qaprlt/heuristic.hpp>
#include <qaprlt/instance.hpp>
#include <qaprlt/reduced.hpp>
#include <qaprlt/rlt.hpp>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qaprlt {

struct Checkpoint;

/// Parent tensors a warm child is folded from, shared by all siblings.
struct WarmSource {
  std::shared_ptr<const DualState> parent;
  int facility = 0;  // parent-local index being fixed
  int location = 0;  // parent-local index it is fixed to
};

/// A subproblem of the search tree.
///
/// When `dual` is present, every completion of the node costs
/// base_lb + evaluate_dual(*dual, local permutation). `lb` is the best lower
/// bound known for any completion and is what pruning compares against.
struct Node {
  std::vector<Assignment> fixed;
  std::vector<int> free_fac;
  std::vector<int> free_loc;
  double base_lb = 0.0;
  double lb = 0.0;
  std::optional<DualState> dual;
  std::optional<WarmSource> warm;  // pending fold, resolved by materialize()
  std::size_t depth = 0;

  std::size_t free_count() const { return free_fac.size(); }
};

/// Builds a node for `fixed` with cold bookkeeping (no tensors yet).
Node make_node(const QapInstance& inst, std::vector<Assignment> fixed, double lb = 0.0);

struct Incumbent {
  Permutation perm;  // empty when only a supplied bound is known
  cost_t value = 0;
};

/// Pruning rule for integral objectives: lb > value - 1 + 1e-6.
inline bool prunable(double lb, cost_t incumbent) { return lb > static_cast<double>(incumbent) - 1.0 + 1e-6; }
/// Largest lower bound that still cannot be pruned against `incumbent`.
inline double prune_threshold(cost_t incumbent) { return static_cast<double>(incumbent) - 1.0 + 1e-6; }

enum class LineKind { row, column };

struct BranchLine {
  LineKind kind = LineKind::row;
  int index = 0;  // node-local facility (row) or location (column)
  friend bool operator==(const BranchLine&, const BranchLine&) = default;
};

enum class BranchMode { warm, cold };

/// Node-local tensors with their completion cost: folds the pending warm
/// source or initialises cold tensors from the reduced problem at `cold_level`.
void materialize(const QapInstance& inst, Node& node, Level cold_level = Level::rlt1, std::uint64_t mem_cap = 0);

/// Parent tensors with local facility a fixed at local location b. The
/// returned state has lb = 0; `constant` receives parent.lb + b(a,b).
DualState fold_dual(const DualState& parent, std::size_t a, std::size_t b, double& constant);

/// One child per location on a row line (or facility on a column line).
/// Warm children need `state`, the node's tensors after its own bounding.
std::vector<Node> branch_children(const QapInstance& inst,
                                  const Node& node,
                                  BranchLine line,
                                  BranchMode mode,
                                  std::shared_ptr<const DualState> state = nullptr);

/// Cost of a node-local completion; requires a materialized node.
double node_completion_cost(const Node& node, std::span<const int> local);

struct StrongBranchConfig {
  std::size_t sb_iters = 1;
  double k = 1e-5;
};

struct StrongBranchResult {
  BranchLine line;
  std::size_t m = 0;
  std::vector<double> estimates;  // m x m child lower bounds, [facility][location] local
  std::vector<double> row_scores;
  std::vector<double> col_scores;
  std::vector<char> prune;  // estimate already exceeds the incumbent threshold
};

/// Bounds every candidate child cheaply (cold child + level-1 ascent capped at
/// sb_iters) and returns the row or column whose weakest child is strongest.
StrongBranchResult strong_branch_select(const QapInstance& inst,
                                        const Node& node,
                                        cost_t incumbent,
                                        const StrongBranchConfig& cfg);

enum class SolveStatus { optimal, ub_only, capped };
std::string_view to_string(SolveStatus s);

struct TrajectoryPoint {
  double seconds = 0.0;
  double lb = 0.0;
  cost_t ub = 0;
};

struct SolveConfig {
  unsigned workers = 1;
  AscentConfig root_ascent{};
  AscentConfig node_ascent{1e-4, 200, 1e-9, {}};
  StrongBranchConfig strong_branch{};
  std::size_t warm_depth = 3;
  HeuristicConfig heuristic{};
  std::optional<cost_t> ub_override;
  std::uint64_t mem_cap = 0;  // bytes; 0 = none
  double time_cap = 0.0;      // seconds; 0 = none
  std::size_t node_limit = 0;  // stop after this many expansions; 0 = none

  std::filesystem::path checkpoint_path;  // empty = no checkpoints
  double checkpoint_interval = 300.0;
  std::optional<std::filesystem::path> resume_path;
  const std::atomic<bool>* interrupt = nullptr;
};

struct SolveReport {
  std::string instance_name;
  std::size_t n = 0;
  SolveStatus status = SolveStatus::optimal;
  cost_t value = 0;
  Permutation perm;
  double root_lb = 0.0;
  std::size_t root_iterations = 0;
  double global_lb = 0.0;  // valid lower bound on the optimum at exit
  std::size_t nodes_expanded = 0;
  std::size_t nodes_fathomed = 0;
  std::size_t max_depth = 0;
  std::size_t open_nodes = 0;
  double wall_seconds = 0.0;
  std::uint64_t peak_tensor_bytes = 0;
  std::vector<TrajectoryPoint> trajectory;
  double k = 0.0;
  unsigned workers = 1;
  std::uint64_t seed = 0;
  std::size_t sb_iters = 0;
  std::size_t warm_depth = 0;
  bool resumed = false;
};

/// Root with its level-2 tensors after dual ascent against `ub`.
Node make_root(const QapInstance& inst, const Incumbent& ub, const AscentConfig& cfg, std::uint64_t mem_cap = 0);

SolveReport solve_bnb(const QapInstance& inst, const SolveConfig& cfg);

struct OracleResult {
  cost_t value = 0;
  Permutation perm;  // lexicographically first optimum
};

/// Enumerates all n! permutations. Refuses n > 8.
OracleResult oracle_qap(const QapInstance& inst);

}  // namespace qaprlt
