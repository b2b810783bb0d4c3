/* SPDX-License-Identifier: Apache-2.0 */

#include "support/testkit.hpp"

#include <qaprlt/instance.hpp>

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace qaprlt;

TEST_CASE("parse_instance reads matrices row-major")
{
  const QapInstance inst = parse_instance("3  0 1 2 1 0 3 2 3 0  0 4 5 4 0 6 5 6 0\n\n", "tiny");
  CHECK(inst.n == 3);
  CHECK(inst.name == "tiny");
  CHECK(inst.f(0, 1) == 1);
  CHECK(inst.d(1, 2) == 6);
  CHECK(inst.f(2, 1) == 3);
}

TEST_CASE("parse_instance accepts arbitrary line layout")
{
  const QapInstance a = parse_instance("2\n0 1\n1 0\n\n0 7\n7 0\n");
  const QapInstance b = parse_instance("  2 0\t1 1 0 0 7 7 0");
  CHECK(a.flow == b.flow);
  CHECK(a.dist == b.dist);
}

TEST_CASE("parse errors are distinct and carry byte offsets")
{
  auto kind_of = [](std::string_view text) {
    try {
      parse_instance(text);
    } catch (const ParseError& e) {
      return e.kind();
    }
    FAIL("no error");
    return ParseError::Kind::overflow;
  };
  CHECK(kind_of("2 0 1 x 0 0 1 1 0") == ParseError::Kind::malformed_token);
  CHECK(kind_of("2 0 1 1 0 0 1") == ParseError::Kind::count_mismatch);
  CHECK(kind_of("1 0 0") == ParseError::Kind::size_too_small);
  CHECK(kind_of("2 0 -1 1 0 0 1 1 0") == ParseError::Kind::negative_entry);
  CHECK(kind_of("2 0 1 1 0 0 1 1 0 9") == ParseError::Kind::count_mismatch);
  CHECK(kind_of("2 0 4000000000 1 0 0 4000000000 1 0") == ParseError::Kind::overflow);

  try {
    parse_instance("2 0 1 1 0 0 1 1");
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("expected 4 distance entries, found 3") != std::string::npos);
    CHECK(e.offset() == 15);
  }
  try {
    parse_instance("2 0 1 z 0 0 1 1 0");
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 6);
  }
}

TEST_CASE("parse_solution reads value and 1-based permutation")
{
  const DeclaredSolution s = parse_solution("3 14  2 1 3");
  CHECK(s.value == 14);
  CHECK(s.perm.locations() == std::vector<int>{1, 0, 2});

  try {
    parse_solution("3 14 2 2 3");
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::not_bijective);
    CHECK(std::string(e.what()).find("duplicate location 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_solution("3 14 2 4 3"), ParseError);
  CHECK_THROWS_AS(parse_solution("3 14 2 1"), ParseError);
  CHECK_THROWS_AS(parse_solution("3 14 0 1 2"), ParseError);
}

TEST_CASE("QAPLIB text round-trips")
{
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const QapInstance inst = testkit::random_instance(2 + seed % 7, seed, 1000, seed % 2 == 0);
    const QapInstance back = parse_instance(to_qaplib_text(inst));
    CHECK(back.n == inst.n);
    CHECK(back.flow == inst.flow);
    CHECK(back.dist == inst.dist);
  }
  const Permutation p({2, 0, 1});
  const DeclaredSolution s = parse_solution(to_solution_text(3, 99, p));
  CHECK(s.value == 99);
  CHECK(s.perm == p);
}

TEST_CASE("evaluate matches the double sum and the diagonal/off-diagonal split")
{
  for (std::size_t n = 2; n <= 6; ++n) {
    const QapInstance inst = testkit::random_instance(n, 100 + n, 30, true);
    for (const auto& p : testkit::all_permutations(n)) {
      const cost_t v = evaluate(inst, Permutation(p));
      CHECK(v == testkit::objective(inst, p));
      cost_t linear = 0, quadratic = 0;
      for (std::size_t i = 0; i < n; ++i) {
        linear += inst.f(i, i) * inst.d(p[i], p[i]);
        for (std::size_t k = 0; k < n; ++k) {
          if (k != i) { quadratic += inst.f(i, k) * inst.d(p[i], p[k]); }
        }
      }
      CHECK(v == linear + quadratic);
    }
  }
}

TEST_CASE("zero flow evaluates to zero everywhere")
{
  QapInstance inst = testkit::random_instance(3, 5);
  std::fill(inst.flow.begin(), inst.flow.end(), 0);
  for (const auto& p : testkit::all_permutations(3)) { CHECK(evaluate(inst, Permutation(p)) == 0); }
}

TEST_CASE("evaluate rejects a size mismatch")
{
  const QapInstance inst = testkit::random_instance(4, 1);
  CHECK_THROWS(evaluate(inst, Permutation::identity(3)));
}

TEST_CASE("memory estimate follows the closed form")
{
  for (std::size_t n : {3u, 4u, 12u, 20u, 30u, 35u}) {
    const MemoryEstimate e = estimate_memory(n);
    const std::uint64_t nn = n;
    CHECK(e.entries_B == nn * nn);
    CHECK(e.entries_C == nn * nn * (nn - 1) * (nn - 1));
    CHECK(e.entries_D == nn * nn * (nn - 1) * (nn - 1) * (nn - 2) * (nn - 2) / 2);
    const double bytes = 8.0 * static_cast<double>(e.entries_B + e.entries_C + e.entries_D) * 1.25;
    CHECK(static_cast<double>(e.bytes_total) == doctest::Approx(bytes).epsilon(1e-12));
  }
  CHECK(estimate_memory(3).entries_D == 18);
  CHECK(estimate_memory(20).entries_D == 23392800);
  CHECK(estimate_memory(30).entries_D == 296704800);
  CHECK_THROWS(estimate_memory(2));
}

TEST_CASE("instance digest separates instances")
{
  const QapInstance a = testkit::random_instance(5, 1);
  QapInstance b = a;
  CHECK(instance_digest(a) == instance_digest(b));
  CHECK(instance_digest(a).size() == 16);
  b.dist[3] += 1;
  CHECK(instance_digest(a) != instance_digest(b));
  CHECK(instance_digest(a) != instance_digest(swap_roles(a)));
}

TEST_CASE("fixture orientation is detected from the declared value")
{
  const QapInstance inst = testkit::random_instance(6, 77);
  const Permutation p({3, 0, 5, 1, 4, 2});
  const QapInstance swapped = swap_roles(inst);
  const cost_t direct = evaluate(inst, p);
  const cost_t flipped = evaluate(swapped, p);
  REQUIRE(direct != flipped);

  const Fixture a = orient_fixture(inst, DeclaredSolution{direct, p});
  CHECK(a.orientation == Orientation::as_published);
  const Fixture b = orient_fixture(inst, DeclaredSolution{flipped, p});
  CHECK(b.orientation == Orientation::roles_swapped);
  CHECK(evaluate(b.inst, p) == flipped);
  CHECK_THROWS(orient_fixture(inst, DeclaredSolution{direct + flipped + 1, p}));
}

TEST_CASE("instance files take their name from the file stem")
{
  const auto dir = std::filesystem::temp_directory_path() / "qaprlt_test_instance";
  std::filesystem::create_directories(dir);
  const auto path = dir / "abc7.dat";
  std::ofstream(path) << to_qaplib_text(testkit::random_instance(4, 3));
  CHECK(read_instance_file(path).name == "abc7");
  CHECK_THROWS(read_instance_file(dir / "missing.dat"));
  std::filesystem::remove_all(dir);
}
