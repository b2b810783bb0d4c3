/* SPDX-License-Identifier: Apache-2.0 */

#include "support/testkit.hpp"

#include <qaprlt/commands.hpp>
#include <qaprlt/report.hpp>

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qaprlt;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args)
{
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path workdir()
{
  const fs::path dir = fs::temp_directory_path() / "qaprlt_test_cli";
  fs::create_directories(dir);
  return dir;
}

fs::path write_instance(const QapInstance& inst, const std::string& name)
{
  const fs::path p = workdir() / (name + ".dat");
  std::ofstream(p) << to_qaplib_text(inst);
  return p;
}

fs::path write_text(const std::string& name, const std::string& text)
{
  const fs::path p = workdir() / name;
  std::ofstream(p) << text;
  return p;
}

// Runs the real executable; returns its exit status.
int run_binary(const std::string& args)
{
  const std::string cmd = std::string(QAPRLT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("solve reports a self-certifying optimum")
{
  const QapInstance inst = testkit::random_instance(7, 11);
  const fs::path dat = write_instance(inst, "solve7");
  const Run r = cli({"solve", dat.string(), "--workers", "2"});
  REQUIRE(r.code == exit_ok);
  const SolveReport rep = report_from_json(r.out);
  CHECK(rep.status == SolveStatus::optimal);
  CHECK(rep.value == testkit::brute_force_optimum(inst));
  CHECK(evaluate(inst, rep.perm) == rep.value);
  CHECK(rep.instance_name == "solve7");
  CHECK(rep.workers == 2);
}

TEST_CASE("report JSON round-trips and text carries the same numbers")
{
  const QapInstance inst = testkit::random_instance(8, 12);
  const fs::path dat = write_instance(inst, "solve8");
  const Run js = cli({"solve", dat.string(), "--workers", "1"});
  const Run tx = cli({"solve", dat.string(), "--workers", "1", "--report", "text"});
  REQUIRE(js.code == exit_ok);
  REQUIRE(tx.code == exit_ok);
  SolveReport a = report_from_json(js.out);
  CHECK(report_from_json(report_to_json(a)).perm == a.perm);
  CHECK(report_to_json(report_from_json(report_to_json(a))) == report_to_json(a));

  // wall time and trajectory timestamps differ between runs; compare the rest
  auto field = [](const std::string& text, const std::string& key) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind(key + " ", 0) == 0) { return line.substr(line.find_first_not_of(' ', key.size())); }
    }
    return std::string("<missing>");
  };
  const nlohmann::json j = nlohmann::json::parse(js.out);
  CHECK(field(tx.out, "value") == std::to_string(a.value));
  CHECK(field(tx.out, "status") == "optimal");
  CHECK(field(tx.out, "nodes_expanded") == std::to_string(a.nodes_expanded));
  CHECK(field(tx.out, "nodes_fathomed") == std::to_string(a.nodes_fathomed));
  CHECK(std::stod(field(tx.out, "root_lb")) == j.at("root_lb").get<double>());
  std::string perm;
  for (int v : a.perm.one_based()) { perm += (perm.empty() ? "" : " ") + std::to_string(v); }
  CHECK(field(tx.out, "permutation") == perm);
}

TEST_CASE("solve exit codes")
{
  const QapInstance inst = testkit::random_instance(11, 3);
  const fs::path dat = write_instance(inst, "solve11");
  CHECK(cli({"solve", dat.string(), "--time-cap", "0.000001"}).code == exit_not_optimal);
  const Run cap = cli({"solve", dat.string(), "--mem-cap", "1KB"});
  CHECK(cap.code == exit_capacity);
  CHECK(cap.err.find("entries_D") != std::string::npos);
  CHECK(cli({"solve", (workdir() / "nope.dat").string()}).code == exit_input_error);
  CHECK(cli({"solve", write_text("bad.dat", "3 1 2").string()}).code == exit_input_error);
  CHECK(cli({"solve", dat.string(), "--report", "yaml"}).code == exit_input_error);
  CHECK(cli({"frobnicate"}).code == exit_input_error);
  CHECK(cli({"solve", dat.string(), "--ub", "1"}).code == exit_not_optimal);
}

TEST_CASE("solve checkpoints and resumes through the command line")
{
  const QapInstance inst = testkit::random_instance(10, 4242);
  const fs::path dat = write_instance(inst, "ckpt10");
  const fs::path ck = workdir() / "ckpt10.json";
  fs::remove(ck);
  // a loose bound keeps the root from closing the search by itself
  const Run part = cli({"solve", dat.string(), "--workers", "1", "--ub", "100000000", "--node-limit", "2",
                        "--checkpoint", ck.string()});
  CHECK(part.code == exit_not_optimal);
  REQUIRE(fs::exists(ck));
  const Run rest = cli({"solve", dat.string(), "--workers", "1", "--ub", "100000000", "--resume", ck.string()});
  REQUIRE(rest.code == exit_ok);
  const SolveReport rep = report_from_json(rest.out);
  CHECK(rep.resumed);
  CHECK(rep.value == report_from_json(cli({"solve", dat.string()}).out).value);

  const fs::path other = write_instance(testkit::random_instance(10, 1), "other10");
  const Run wrong = cli({"solve", other.string(), "--resume", ck.string()});
  CHECK(wrong.code == exit_input_error);
  CHECK(wrong.err.find("checkpoint") != std::string::npos);
}

TEST_CASE("bound prints lb, ub, gap and iterations")
{
  QapInstance zero = testkit::random_instance(5, 1);
  std::fill(zero.flow.begin(), zero.flow.end(), 0);
  const Run z = cli({"bound", write_instance(zero, "zero5").string()});
  REQUIRE(z.code == exit_ok);
  const auto jz = nlohmann::json::parse(z.out);
  CHECK(jz.at("lb").get<double>() == 0.0);
  CHECK(jz.at("gap").get<double>() == 0.0);

  const QapInstance inst = testkit::random_instance(7, 2);
  const fs::path dat = write_instance(inst, "bound7");
  const cost_t opt = testkit::brute_force_optimum(inst);
  for (const char* level : {"1", "2"}) {
    const Run r = cli({"bound", dat.string(), "--level", level, "--ub", std::to_string(opt), "--workers", "1"});
    REQUIRE(r.code == exit_ok);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("ub").get<cost_t>() == opt);
    CHECK(j.at("lb").get<double>() <= static_cast<double>(opt) + 1e-6);
    CHECK(j.at("gap").get<double>() == doctest::Approx((opt - j.at("lb").get<double>()) / opt));
    CHECK(j.at("iterations").get<int>() >= 1);
  }
  const Run a = cli({"bound", dat.string(), "--ub", std::to_string(opt), "--k", "1e-6"});
  const Run b = cli({"bound", dat.string(), "--ub", std::to_string(opt), "--k", "1e-6"});
  CHECK(nlohmann::json::parse(a.out).at("lb") == nlohmann::json::parse(b.out).at("lb"));
  CHECK(cli({"bound", dat.string(), "--level", "3"}).code == exit_input_error);
}

TEST_CASE("verify checks declared values in either orientation")
{
  const QapInstance inst = testkit::random_instance(6, 21);
  const fs::path dat = write_instance(inst, "verify6");
  const Permutation p({4, 2, 0, 5, 1, 3});
  const cost_t v = evaluate(inst, p);
  const fs::path good = write_text("good.sln", to_solution_text(6, v, p));
  const Run ok = cli({"verify", dat.string(), good.string()});
  CHECK(ok.code == exit_ok);
  CHECK(ok.out.find(std::to_string(v)) != std::string::npos);

  const cost_t flipped = evaluate(swap_roles(inst), p);
  REQUIRE(flipped != v);
  const Run swapped = cli({"verify", dat.string(), write_text("swap.sln", to_solution_text(6, flipped, p)).string()});
  CHECK(swapped.code == exit_ok);
  CHECK(swapped.out.find("roles_swapped") != std::string::npos);

  Permutation broken = p;
  broken.swap_facilities(0, 1);
  REQUIRE(evaluate(inst, broken) != v);
  const Run bad = cli({"verify", dat.string(), write_text("bad.sln", to_solution_text(6, v, broken)).string()});
  CHECK(bad.code == exit_verify_mismatch);
  CHECK(bad.out.find("MISMATCH") != std::string::npos);
  CHECK(cli({"verify", dat.string(), write_text("dup.sln", "6 1 1 1 2 3 4 5").string()}).code == exit_input_error);
}

TEST_CASE("heuristic is deterministic and capacity prints the estimate")
{
  const fs::path dat = write_instance(testkit::random_instance(9, 4), "heur9");
  const Run a = cli({"heuristic", dat.string(), "--seed", "7"});
  const Run b = cli({"heuristic", dat.string(), "--seed", "7"});
  CHECK(a.code == exit_ok);
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  std::vector<int> p = j.at("permutation").get<std::vector<int>>();
  for (int& x : p) { --x; }
  CHECK(evaluate(read_instance_file(dat), Permutation(p)) == j.at("value").get<cost_t>());

  const Run c30 = cli({"capacity", "30"});
  REQUIRE(c30.code == exit_ok);
  CHECK(nlohmann::json::parse(c30.out).at("entries_D").get<std::uint64_t>() == 296704800ull);
  CHECK(nlohmann::json::parse(cli({"capacity", "3"}).out).at("entries_D").get<int>() == 18);
  CHECK(nlohmann::json::parse(cli({"capacity", dat.string()}).out).at("n").get<int>() == 9);
  CHECK(cli({"capacity", "2"}).code == exit_input_error);
}

TEST_CASE("byte sizes and environment overrides")
{
  CHECK(parse_byte_size("1GB") == 1000000000ull);
  CHECK(parse_byte_size("1GiB") == 1073741824ull);
  CHECK(parse_byte_size("512m") == 512000000ull);
  CHECK(parse_byte_size("1.5K") == 1500ull);
  CHECK(parse_byte_size("42") == 42ull);
  CHECK_FALSE(parse_byte_size("lots").has_value());
  CHECK_FALSE(parse_byte_size("5XB").has_value());
  CHECK(physical_memory_bytes() > 0);

  const fs::path dat = write_instance(testkit::random_instance(6, 5), "env6");
  ::setenv("QAPRLT_WORKERS", "3", 1);
  CHECK(report_from_json(cli({"solve", dat.string()}).out).workers == 3);
  CHECK(report_from_json(cli({"solve", dat.string(), "--workers", "2"}).out).workers == 2);
  ::setenv("QAPRLT_WORKERS", "zero", 1);
  CHECK(cli({"solve", dat.string()}).code == exit_input_error);
  ::unsetenv("QAPRLT_WORKERS");
  ::setenv("QAPRLT_MEM_CAP", "10", 1);
  CHECK(cli({"solve", dat.string()}).code == exit_capacity);
  ::unsetenv("QAPRLT_MEM_CAP");
}

TEST_CASE("the executable honours the exit-code contract")
{
  const QapInstance inst = testkit::random_instance(6, 8);
  const fs::path dat = write_instance(inst, "exe6");
  CHECK(run_binary("solve " + dat.string()) == exit_ok);
  CHECK(run_binary("solve " + dat.string() + " --mem-cap 100") == exit_capacity);
  CHECK(run_binary("solve " + (workdir() / "missing.dat").string()) == exit_input_error);
  const Permutation p = Permutation::identity(6);
  const fs::path wrong = write_text("exe6.sln", to_solution_text(6, evaluate(inst, p) + 1, p));
  CHECK(run_binary("verify " + dat.string() + " " + wrong.string()) == exit_verify_mismatch);
  CHECK(run_binary("--help") == exit_ok);
}
