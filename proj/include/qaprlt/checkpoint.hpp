/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <qaprlt/instance.hpp>
#include <qaprlt/reduced.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qaprlt {

inline constexpr int checkpoint_format_version = 1;

class CheckpointError : public std::runtime_error {
 public:
  enum class Kind { io, malformed, version_mismatch, digest_mismatch };
  CheckpointError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct OpenNode {
  std::vector<Assignment> fixed;
  double lb = 0.0;
  friend bool operator==(const OpenNode&, const OpenNode&) = default;
};

/// Everything needed to continue a search: open subproblems in cold form plus
/// the incumbent. See docs/checkpoint-format.md for the layout.
struct Checkpoint {
  std::string instance_digest;
  std::size_t n = 0;
  cost_t incumbent_value = 0;
  std::optional<Permutation> incumbent_perm;
  std::vector<OpenNode> open;
  std::size_t nodes_expanded = 0;
  std::size_t nodes_fathomed = 0;
  std::size_t max_depth = 0;
  double elapsed_seconds = 0.0;
  double root_lb = 0.0;
  bool root_done = false;
};

std::string checkpoint_save(const Checkpoint& cp);
/// Throws CheckpointError on a malformed or truncated stream, a format
/// version other than checkpoint_format_version, or a digest that does not
/// match `inst`.
Checkpoint checkpoint_load(std::string_view text, const QapInstance& inst);

/// Writes to a sibling temporary file and renames it over `path`.
void write_checkpoint_file(const std::filesystem::path& path, const Checkpoint& cp);
Checkpoint read_checkpoint_file(const std::filesystem::path& path, const QapInstance& inst);

}  // namespace qaprlt
