/* SPDX-License-Identifier: Apache-2.0 */

#include <qaprlt/instance.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>

namespace qaprlt {

namespace {

struct Token {
  cost_t value;
  std::size_t offset;
};

class TokenReader {
 public:
  explicit TokenReader(std::string_view text) : text_(text) {}

  // Returns false at end of input; throws on a token that is not a 64-bit integer.
  bool next(Token& tok)
  {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) { ++pos_; }
    if (pos_ >= text_.size()) { return false; }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) { ++pos_; }
    std::string_view word = text_.substr(start, pos_ - start);
    const char* first = word.data();
    if (!word.empty() && word.front() == '+') { ++first; }
    cost_t value = 0;
    auto [ptr, ec] = std::from_chars(first, word.data() + word.size(), value);
    if (ec != std::errc{} || ptr != word.data() + word.size()) {
      throw ParseError(ParseError::Kind::malformed_token, start,
                       "malformed integer token '" + std::string(word) + "'");
    }
    tok = Token{value, start};
    return true;
  }

  std::size_t position() const { return pos_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string slurp(std::istream& in)
{
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void read_matrix(TokenReader& reader, std::size_t n, const char* what, std::vector<cost_t>& out)
{
  out.assign(n * n, 0);
  Token tok{};
  for (std::size_t e = 0; e < n * n; ++e) {
    if (!reader.next(tok)) {
      throw ParseError(ParseError::Kind::count_mismatch, reader.position(),
                       "expected " + std::to_string(n * n) + " " + what + " entries, found " +
                         std::to_string(e));
    }
    if (tok.value < 0) {
      throw ParseError(ParseError::Kind::negative_entry, tok.offset,
                       std::string("negative ") + what + " entry " + std::to_string(tok.value));
    }
    out[e] = tok.value;
  }
}

bool product_sum_overflows(std::size_t n, cost_t max_f, cost_t max_d)
{
  // n^2 * max(F) * max(D) must stay below 2^63.
  long double bound = static_cast<long double>(n) * static_cast<long double>(n) *
                      static_cast<long double>(max_f) * static_cast<long double>(max_d);
  return bound >= 9.2e18L;
}

}  // namespace

void QapInstance::validate() const
{
  if (n < 2) { throw std::invalid_argument("instance size must be at least 2"); }
  if (flow.size() != n * n || dist.size() != n * n) {
    throw std::invalid_argument("flow and distance matrices must both be n x n");
  }
  auto negative = [](cost_t v) { return v < 0; };
  if (std::ranges::any_of(flow, negative) || std::ranges::any_of(dist, negative)) {
    throw std::invalid_argument("flow and distance entries must be nonnegative");
  }
  if (product_sum_overflows(n, std::ranges::max(flow), std::ranges::max(dist))) {
    throw std::invalid_argument("objective may overflow 64-bit integers");
  }
}

bool is_bijection(std::span<const int> locations)
{
  std::vector<char> seen(locations.size(), 0);
  for (int l : locations) {
    if (l < 0 || static_cast<std::size_t>(l) >= locations.size() || seen[l]) { return false; }
    seen[l] = 1;
  }
  return true;
}

Permutation::Permutation(std::vector<int> locations) : loc_(std::move(locations))
{
  if (!is_bijection(loc_)) { throw std::invalid_argument("permutation is not a bijection"); }
}

Permutation Permutation::identity(std::size_t n)
{
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  return Permutation(std::move(p));
}

std::vector<int> Permutation::one_based() const
{
  std::vector<int> out(loc_);
  for (int& v : out) { ++v; }
  return out;
}

QapInstance parse_instance(std::string_view text, std::string name)
{
  TokenReader reader(text);
  Token tok{};
  if (!reader.next(tok)) {
    throw ParseError(ParseError::Kind::count_mismatch, 0, "expected instance size, found end of input");
  }
  if (tok.value < 2) {
    throw ParseError(ParseError::Kind::size_too_small, tok.offset,
                     "instance size must be at least 2, got " + std::to_string(tok.value));
  }
  if (tok.value > 4096) {
    throw ParseError(ParseError::Kind::out_of_range, tok.offset,
                     "instance size " + std::to_string(tok.value) + " is unreasonably large");
  }
  QapInstance inst;
  inst.name = std::move(name);
  inst.n = static_cast<std::size_t>(tok.value);
  read_matrix(reader, inst.n, "flow", inst.flow);
  read_matrix(reader, inst.n, "distance", inst.dist);
  if (reader.next(tok)) {
    throw ParseError(ParseError::Kind::count_mismatch, tok.offset,
                     "unexpected trailing token after " + std::to_string(2 * inst.n * inst.n) + " matrix entries");
  }
  if (product_sum_overflows(inst.n, std::ranges::max(inst.flow), std::ranges::max(inst.dist))) {
    throw ParseError(ParseError::Kind::overflow, 0, "objective may overflow 64-bit integers");
  }
  return inst;
}

QapInstance parse_instance(std::istream& in, std::string name) { return parse_instance(slurp(in), std::move(name)); }

DeclaredSolution parse_solution(std::string_view text)
{
  TokenReader reader(text);
  Token tok{};
  if (!reader.next(tok)) {
    throw ParseError(ParseError::Kind::count_mismatch, 0, "expected solution size, found end of input");
  }
  if (tok.value < 1 || tok.value > 4096) {
    throw ParseError(ParseError::Kind::size_too_small, tok.offset, "invalid solution size " + std::to_string(tok.value));
  }
  const auto n = static_cast<std::size_t>(tok.value);
  if (!reader.next(tok)) {
    throw ParseError(ParseError::Kind::count_mismatch, reader.position(), "expected objective value, found end of input");
  }
  DeclaredSolution sln;
  sln.value = tok.value;

  std::vector<int> loc;
  loc.reserve(n);
  std::vector<char> seen(n, 0);
  while (reader.next(tok)) {
    if (loc.size() == n) {
      throw ParseError(ParseError::Kind::count_mismatch, tok.offset,
                       "expected " + std::to_string(n) + " locations, found more");
    }
    if (tok.value < 1 || tok.value > static_cast<cost_t>(n)) {
      throw ParseError(ParseError::Kind::out_of_range, tok.offset,
                       "location " + std::to_string(tok.value) + " outside 1.." + std::to_string(n));
    }
    if (seen[tok.value - 1]) {
      throw ParseError(ParseError::Kind::not_bijective, tok.offset, "duplicate location " + std::to_string(tok.value));
    }
    seen[tok.value - 1] = 1;
    loc.push_back(static_cast<int>(tok.value - 1));
  }
  if (loc.size() != n) {
    throw ParseError(ParseError::Kind::count_mismatch, reader.position(),
                     "expected " + std::to_string(n) + " locations, found " + std::to_string(loc.size()));
  }
  sln.perm = Permutation(std::move(loc));
  return sln;
}

DeclaredSolution parse_solution(std::istream& in) { return parse_solution(slurp(in)); }

std::string to_qaplib_text(const QapInstance& inst)
{
  std::ostringstream out;
  out << inst.n << "\n\n";
  auto dump = [&](const std::vector<cost_t>& m) {
    for (std::size_t r = 0; r < inst.n; ++r) {
      for (std::size_t c = 0; c < inst.n; ++c) { out << (c ? " " : "") << m[r * inst.n + c]; }
      out << '\n';
    }
  };
  dump(inst.flow);
  out << '\n';
  dump(inst.dist);
  return out.str();
}

std::string to_solution_text(std::size_t n, cost_t value, const Permutation& perm)
{
  std::ostringstream out;
  out << n << ' ' << value << '\n';
  for (std::size_t i = 0; i < perm.size(); ++i) { out << (i ? " " : "") << perm[i] + 1; }
  out << '\n';
  return out.str();
}

cost_t evaluate(const QapInstance& inst, const Permutation& perm)
{
  if (perm.size() != inst.n) {
    throw std::invalid_argument("permutation size " + std::to_string(perm.size()) + " does not match instance size " +
                                std::to_string(inst.n));
  }
  cost_t total = 0;
  for (std::size_t i = 0; i < inst.n; ++i) {
    const cost_t* frow = &inst.flow[i * inst.n];
    const cost_t* drow = &inst.dist[static_cast<std::size_t>(perm[i]) * inst.n];
    for (std::size_t k = 0; k < inst.n; ++k) { total += frow[k] * drow[perm[k]]; }
  }
  return total;
}

MemoryEstimate estimate_memory(std::size_t n)
{
  if (n < 3) { throw std::invalid_argument("memory estimate requires n >= 3"); }
  const std::uint64_t m = n;
  MemoryEstimate est;
  est.entries_B = m * m;
  est.entries_C = m * m * (m - 1) * (m - 1);
  est.entries_D = (m * (m - 1) * (m - 2)) * (m * (m - 1) * (m - 2)) / 2;
  const double raw = 8.0 * static_cast<double>(est.entries_B + est.entries_C + est.entries_D);
  est.bytes_total = static_cast<std::uint64_t>(raw * memory_overhead_factor);
  return est;
}

MemoryEstimate estimate_memory_level1(std::size_t n)
{
  MemoryEstimate est = estimate_memory(n);
  est.entries_D = 0;
  est.bytes_total =
    static_cast<std::uint64_t>(8.0 * static_cast<double>(est.entries_B + est.entries_C) * memory_overhead_factor);
  return est;
}

std::string instance_digest(const QapInstance& inst)
{
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  mix(inst.n);
  for (cost_t v : inst.flow) { mix(static_cast<std::uint64_t>(v)); }
  for (cost_t v : inst.dist) { mix(static_cast<std::uint64_t>(v)); }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

QapInstance read_instance_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) { throw std::runtime_error("cannot open instance file " + path.string()); }
  return parse_instance(in, path.stem().string());
}

DeclaredSolution read_solution_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) { throw std::runtime_error("cannot open solution file " + path.string()); }
  return parse_solution(in);
}

std::string_view to_string(Orientation o)
{
  return o == Orientation::as_published ? "as_published" : "roles_swapped";
}

QapInstance swap_roles(const QapInstance& inst)
{
  QapInstance out = inst;
  std::swap(out.flow, out.dist);
  return out;
}

Fixture orient_fixture(QapInstance inst, DeclaredSolution sln)
{
  if (sln.perm.size() != inst.n) {
    throw std::runtime_error("solution size " + std::to_string(sln.perm.size()) + " does not match instance size " +
                             std::to_string(inst.n));
  }
  const cost_t direct = evaluate(inst, sln.perm);
  if (direct == sln.value) { return Fixture{std::move(inst), std::move(sln), Orientation::as_published}; }
  QapInstance swapped = swap_roles(inst);
  const cost_t flipped = evaluate(swapped, sln.perm);
  if (flipped == sln.value) { return Fixture{std::move(swapped), std::move(sln), Orientation::roles_swapped}; }
  throw std::runtime_error("declared value " + std::to_string(sln.value) + " matches neither orientation (got " +
                           std::to_string(direct) + " and " + std::to_string(flipped) + ")");
}

Fixture load_fixture(const std::filesystem::path& dat, const std::filesystem::path& sln)
{
  return orient_fixture(read_instance_file(dat), read_solution_file(sln));
}

}  // namespace qaprlt
