/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qaprlt {

using cost_t = std::int64_t;

/// Dense square QAP instance: n facilities, n locations, flows between
/// facilities and distances between locations. Matrices are row-major.
struct QapInstance {
  std::string name;
  std::size_t n = 0;
  std::vector<cost_t> flow;
  std::vector<cost_t> dist;

  cost_t f(std::size_t i, std::size_t k) const { return flow[i * n + k]; }
  cost_t d(std::size_t j, std::size_t l) const { return dist[j * n + l]; }

  /// Throws std::invalid_argument if shapes, signs or the overflow bound are violated.
  void validate() const;
};

/// p[i] is the location of facility i. Always a bijection on {0..n-1}.
class Permutation {
 public:
  Permutation() = default;
  /// Throws std::invalid_argument unless `locations` is a bijection.
  explicit Permutation(std::vector<int> locations);

  static Permutation identity(std::size_t n);

  std::size_t size() const { return loc_.size(); }
  int operator[](std::size_t i) const { return loc_[i]; }
  const std::vector<int>& locations() const { return loc_; }
  std::vector<int> one_based() const;

  /// Exchange the locations of facilities a and b.
  void swap_facilities(std::size_t a, std::size_t b) { std::swap(loc_[a], loc_[b]); }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> loc_;
};

bool is_bijection(std::span<const int> locations);

class ParseError : public std::runtime_error {
 public:
  enum class Kind { malformed_token, count_mismatch, size_too_small, negative_entry, overflow, not_bijective, out_of_range };

  ParseError(Kind kind, std::size_t offset, const std::string& what)
    : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), kind_(kind), offset_(offset)
  {
  }

  Kind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

QapInstance parse_instance(std::string_view text, std::string name = {});
QapInstance parse_instance(std::istream& in, std::string name = {});

struct DeclaredSolution {
  cost_t value = 0;
  Permutation perm;
};

DeclaredSolution parse_solution(std::string_view text);
DeclaredSolution parse_solution(std::istream& in);

/// QAPLIB text for `inst`; parse_instance(to_qaplib_text(x)) reproduces x.
std::string to_qaplib_text(const QapInstance& inst);
std::string to_solution_text(std::size_t n, cost_t value, const Permutation& perm);

/// Full objective sum_i sum_k f_ik d_{p(i)p(k)}, diagonal terms included.
cost_t evaluate(const QapInstance& inst, const Permutation& perm);

struct MemoryEstimate {
  std::uint64_t entries_B = 0;
  std::uint64_t entries_C = 0;
  std::uint64_t entries_D = 0;
  std::uint64_t bytes_total = 0;
};

inline constexpr double memory_overhead_factor = 1.25;

/// Entry counts of the level-2 reduced-cost tensors with shared complementary D blocks.
MemoryEstimate estimate_memory(std::size_t n);
/// Level-1 tensors only (no D).
MemoryEstimate estimate_memory_level1(std::size_t n);

/// Stable 64-bit FNV-1a digest of n and both matrices, as 16 hex digits.
std::string instance_digest(const QapInstance& inst);

QapInstance read_instance_file(const std::filesystem::path& path);
DeclaredSolution read_solution_file(const std::filesystem::path& path);

enum class Orientation { as_published, roles_swapped };
std::string_view to_string(Orientation o);

QapInstance swap_roles(const QapInstance& inst);

/// An instance/solution pair whose declared value has been re-verified by
/// evaluate. `inst` is already in the orientation that matched.
struct Fixture {
  QapInstance inst;
  DeclaredSolution solution;
  Orientation orientation = Orientation::as_published;
};

/// Throws std::runtime_error if the declared value matches neither role assignment.
Fixture orient_fixture(QapInstance inst, DeclaredSolution sln);
Fixture load_fixture(const std::filesystem::path& dat, const std::filesystem::path& sln);

}  // namespace qaprlt
