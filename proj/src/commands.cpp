/* SPDX-License-Identifier: Apache-2.0 */

#include <qaprlt/bnb.hpp>
#include <qaprlt/checkpoint.hpp>
#include <qaprlt/commands.hpp>
#include <qaprlt/report.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <thread>

namespace qaprlt {

using nlohmann::json;

std::optional<std::uint64_t> parse_byte_size(std::string_view text)
{
  std::string s(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  std::string suffix = s.substr(used);
  for (char& ch : suffix) { ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch))); }
  if (!suffix.empty() && suffix.back() == 'B') { suffix.pop_back(); }
  double mult = 1.0;
  if (suffix.empty()) {
  } else if (suffix == "K") {
    mult = 1e3;
  } else if (suffix == "M") {
    mult = 1e6;
  } else if (suffix == "G") {
    mult = 1e9;
  } else if (suffix == "T") {
    mult = 1e12;
  } else if (suffix == "KI") {
    mult = 1024.0;
  } else if (suffix == "MI") {
    mult = 1024.0 * 1024.0;
  } else if (suffix == "GI") {
    mult = 1024.0 * 1024.0 * 1024.0;
  } else if (suffix == "TI") {
    mult = 1024.0 * 1024.0 * 1024.0 * 1024.0;
  } else {
    return std::nullopt;
  }
  const double bytes = value * mult;
  if (!(bytes >= 0.0) || bytes > 1.8e19) { return std::nullopt; }
  return static_cast<std::uint64_t>(std::llround(bytes));
}

std::uint64_t physical_memory_bytes()
{
  const long pages = ::sysconf(_SC_PHYS_PAGES);
  const long page = ::sysconf(_SC_PAGE_SIZE);
  if (pages <= 0 || page <= 0) { return 0; }
  return static_cast<std::uint64_t>(pages) * static_cast<std::uint64_t>(page);
}

namespace {

const char* env(const char* name)
{
  const char* v = std::getenv(name);
  return v && *v ? v : nullptr;
}

unsigned default_workers()
{
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

struct Common {
  std::string mem_cap_text;
  std::optional<unsigned> workers;

  // flag > environment > default
  std::uint64_t mem_cap() const
  {
    std::string text = mem_cap_text;
    if (text.empty() && env("QAPRLT_MEM_CAP")) { text = env("QAPRLT_MEM_CAP"); }
    if (text.empty()) { return static_cast<std::uint64_t>(0.8 * static_cast<double>(physical_memory_bytes())); }
    const auto v = parse_byte_size(text);
    if (!v) { throw CLI::ValidationError("--mem-cap", "cannot read byte size '" + text + "'"); }
    return *v;
  }

  unsigned worker_count() const
  {
    if (workers) { return std::max(1u, *workers); }
    if (const char* e = env("QAPRLT_WORKERS")) {
      char* end = nullptr;
      const unsigned long v = std::strtoul(e, &end, 10);
      if (end == e || *end != '\0' || v == 0) {
        throw CLI::ValidationError("QAPRLT_WORKERS", std::string("cannot read worker count '") + e + "'");
      }
      return static_cast<unsigned>(v);
    }
    return default_workers();
  }
};

std::string fmt(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_capacity(std::ostream& out, std::size_t n, bool as_json)
{
  const MemoryEstimate e = estimate_memory(n);
  const MemoryEstimate e1 = estimate_memory_level1(n);
  if (as_json) {
    json j = {{"n", n},
              {"entries_B", e.entries_B},
              {"entries_C", e.entries_C},
              {"entries_D", e.entries_D},
              {"bytes_total", e.bytes_total},
              {"bytes_level1", e1.bytes_total},
              {"overhead_factor", memory_overhead_factor}};
    out << j.dump(2) << "\n";
    return;
  }
  out << "n            " << n << "\n";
  out << "entries_B    " << e.entries_B << "\n";
  out << "entries_C    " << e.entries_C << "\n";
  out << "entries_D    " << e.entries_D << "\n";
  out << "bytes_total  " << e.bytes_total << " (" << fmt(static_cast<double>(e.bytes_total) / 1e9) << " GB)\n";
  out << "bytes_level1 " << e1.bytes_total << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const std::atomic<bool>* interrupt)
{
  CLI::App app{"Exact quadratic assignment solver with level-2 RLT dual-ascent bounds", "qaprlt"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qaprlt 1.0");

  Common common;
  std::string report_mode = "json";

  // solve
  auto* solve = app.add_subcommand("solve", "Solve an instance to proven optimality");
  std::string solve_path;
  std::optional<cost_t> ub;
  double k = 1e-5;
  double node_k = SolveConfig{}.node_ascent.k;
  std::size_t node_iters = SolveConfig{}.node_ascent.max_iters;
  std::size_t root_iters = AscentConfig{}.max_iters;
  std::size_t sb_iters = StrongBranchConfig{}.sb_iters;
  std::size_t warm_depth = SolveConfig{}.warm_depth;
  std::string checkpoint;
  double checkpoint_interval = 300.0;
  std::string resume;
  std::uint64_t seed = 1;
  std::size_t restarts = HeuristicConfig{}.restarts;
  double time_cap = 0.0;
  std::size_t node_limit = 0;
  std::string lap = "hungarian";
  solve->add_option("instance", solve_path, "QAPLIB .dat file")->required()->check(CLI::ExistingFile);
  solve->add_option("--ub", ub, "Known upper bound; only solutions at or below it are sought");
  solve->add_option("--k", k, "Root dual-ascent minimal progress, as a fraction of ub")->check(CLI::Range(1e-7, 1.0));
  solve->add_option("--root-iters", root_iters, "Root dual-ascent iteration cap")->check(CLI::PositiveNumber);
  solve->add_option("--node-k", node_k, "Per-node minimal progress")->check(CLI::Range(1e-7, 1.0));
  solve->add_option("--node-iters", node_iters, "Per-node iteration cap")->check(CLI::PositiveNumber);
  solve->add_option("--workers", common.workers, "Worker threads (default: all cores)")->check(CLI::PositiveNumber);
  solve->add_option("--sb-iters", sb_iters, "Strong-branching iteration cap")->check(CLI::PositiveNumber);
  solve->add_option("--warm-depth", warm_depth, "Children shallower than this reuse parent tensors");
  solve->add_option("--checkpoint", checkpoint, "Checkpoint file");
  solve->add_option("--checkpoint-interval", checkpoint_interval, "Seconds between checkpoints")
    ->check(CLI::PositiveNumber);
  solve->add_option("--resume", resume, "Resume from a checkpoint")->check(CLI::ExistingFile);
  solve->add_option("--seed", seed, "Heuristic seed");
  solve->add_option("--restarts", restarts, "Heuristic restarts")->check(CLI::PositiveNumber);
  solve->add_option("--time-cap", time_cap, "Stop after this many seconds (0 = none)")->check(CLI::NonNegativeNumber);
  solve->add_option("--node-limit", node_limit, "Stop after this many expansions (0 = none)");
  solve->add_option("--mem-cap", common.mem_cap_text, "Tensor memory cap, e.g. 8GB (default: 80% of RAM)");
  solve->add_option("--lap", lap, "Assignment solver")->check(CLI::IsMember({"hungarian", "auction"}));
  solve->add_option("--report", report_mode, "Report format")->check(CLI::IsMember({"json", "text"}));

  // bound
  auto* bound = app.add_subcommand("bound", "Root lower bound by dual ascent");
  std::string bound_path;
  int level = 2;
  std::optional<cost_t> bound_ub;
  double bound_k = 1e-5;
  std::size_t bound_iters = AscentConfig{}.max_iters;
  std::size_t bound_restarts = HeuristicConfig{}.restarts;
  std::uint64_t bound_seed = 1;
  std::string bound_lap = "hungarian";
  std::optional<unsigned> bound_workers;
  std::string bound_mem;
  bound->add_option("instance", bound_path, "QAPLIB .dat file")->required()->check(CLI::ExistingFile);
  bound->add_option("--level", level, "RLT level")->check(CLI::IsMember({1, 2}));
  bound->add_option("--k", bound_k, "Minimal progress, as a fraction of ub")->check(CLI::Range(1e-7, 1.0));
  bound->add_option("--ub", bound_ub, "Upper bound (default: heuristic)");
  bound->add_option("--max-iters", bound_iters, "Iteration cap")->check(CLI::PositiveNumber);
  bound->add_option("--restarts", bound_restarts, "Heuristic restarts when --ub is absent")->check(CLI::PositiveNumber);
  bound->add_option("--seed", bound_seed, "Heuristic seed");
  bound->add_option("--workers", bound_workers, "Threads for block operations")->check(CLI::PositiveNumber);
  bound->add_option("--mem-cap", bound_mem, "Tensor memory cap");
  bound->add_option("--lap", bound_lap, "Assignment solver")->check(CLI::IsMember({"hungarian", "auction"}));
  bound->add_option("--report", report_mode, "Report format")->check(CLI::IsMember({"json", "text"}));

  // verify
  auto* verify = app.add_subcommand("verify", "Check a declared solution against an instance");
  std::string verify_dat, verify_sln;
  verify->add_option("instance", verify_dat, "QAPLIB .dat file")->required()->check(CLI::ExistingFile);
  verify->add_option("solution", verify_sln, "QAPLIB .sln file")->required()->check(CLI::ExistingFile);

  // heuristic
  auto* heur = app.add_subcommand("heuristic", "Multi-start pairwise-exchange local search");
  std::string heur_path;
  std::size_t heur_restarts = HeuristicConfig{}.restarts;
  std::uint64_t heur_seed = 1;
  heur->add_option("instance", heur_path, "QAPLIB .dat file")->required()->check(CLI::ExistingFile);
  heur->add_option("--restarts", heur_restarts, "Restarts")->check(CLI::PositiveNumber);
  heur->add_option("--seed", heur_seed, "Seed");
  heur->add_option("--report", report_mode, "Report format")->check(CLI::IsMember({"json", "text"}));

  // capacity
  auto* cap = app.add_subcommand("capacity", "Tensor memory estimate for level-2 bounds");
  std::string cap_arg;
  cap->add_option("n_or_instance", cap_arg, "Problem size or QAPLIB .dat file")->required();
  cap->add_option("--report", report_mode, "Report format")->check(CLI::IsMember({"json", "text"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? exit_ok : exit_input_error;
  }
  const bool as_json = report_mode == "json";

  try {
    if (*solve) {
      const QapInstance inst = read_instance_file(solve_path);
      SolveConfig cfg;
      cfg.workers = common.worker_count();
      cfg.root_ascent.k = k;
      cfg.root_ascent.max_iters = root_iters;
      cfg.root_ascent.exec.threads = cfg.workers;
      cfg.node_ascent.k = node_k;
      cfg.node_ascent.max_iters = node_iters;
      const LapMethod method = lap == "auction" ? LapMethod::auction : LapMethod::hungarian;
      cfg.root_ascent.exec.lap = method;
      cfg.node_ascent.exec.lap = method;
      cfg.strong_branch.sb_iters = sb_iters;
      cfg.warm_depth = warm_depth;
      cfg.heuristic.rng_seed = seed;
      cfg.heuristic.restarts = restarts;
      cfg.ub_override = ub;
      cfg.mem_cap = common.mem_cap();
      cfg.time_cap = time_cap;
      cfg.node_limit = node_limit;
      cfg.checkpoint_path = checkpoint;
      cfg.checkpoint_interval = checkpoint_interval;
      if (!resume.empty()) { cfg.resume_path = resume; }
      cfg.interrupt = interrupt;
      const SolveReport r = solve_bnb(inst, cfg);
      out << (as_json ? report_to_json(r) : report_to_text(r));
      return r.status == SolveStatus::optimal ? exit_ok : exit_not_optimal;
    }

    if (*bound) {
      const QapInstance inst = read_instance_file(bound_path);
      Common bc{bound_mem, bound_workers};
      cost_t ub_used = 0;
      if (bound_ub) {
        ub_used = *bound_ub;
      } else {
        HeuristicConfig hc;
        hc.restarts = bound_restarts;
        hc.rng_seed = bound_seed;
        ub_used = heuristic_ub(inst, hc).value;
      }
      AscentConfig ac;
      ac.k = bound_k;
      ac.max_iters = bound_iters;
      ac.exec.threads = bc.worker_count();
      ac.exec.lap = bound_lap == "auction" ? LapMethod::auction : LapMethod::hungarian;
      const auto t0 = std::chrono::steady_clock::now();
      AscentResult res;
      std::uint64_t bytes = 0;
      if (ub_used <= 0) {
        // every cost is nonnegative, so a zero bound is already tight
        res.status = AscentStatus::pruned;
      } else {
        DualState s = init_dual(inst, level == 2 ? Level::rlt2 : Level::rlt1, bc.mem_cap());
        bytes = s.bytes();
        res = level == 2 ? dual_ascent_rlt2(s, static_cast<double>(ub_used), ac)
                         : dual_ascent_rlt1(s, static_cast<double>(ub_used), ac);
      }
      const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const double gap = ub_used > 0 ? (static_cast<double>(ub_used) - res.lb) / static_cast<double>(ub_used) : 0.0;
      if (as_json) {
        json j = {{"instance", inst.name},
                  {"n", inst.n},
                  {"level", level},
                  {"lb", res.lb},
                  {"ub", ub_used},
                  {"gap", gap},
                  {"iterations", res.iterations},
                  {"status", std::string(to_string(res.status))},
                  {"seconds", seconds},
                  {"tensor_bytes", bytes},
                  {"k", bound_k}};
        out << j.dump(2) << "\n";
      } else {
        out << "instance     " << inst.name << " (n=" << inst.n << ")\n";
        out << "level        " << level << "\n";
        out << "lb           " << fmt(res.lb) << "\n";
        out << "ub           " << ub_used << "\n";
        out << "gap          " << fmt(gap) << "\n";
        out << "iterations   " << res.iterations << "\n";
        out << "status       " << to_string(res.status) << "\n";
        out << "seconds      " << fmt(seconds) << "\n";
        out << "tensor_bytes " << bytes << "\n";
      }
      return exit_ok;
    }

    if (*verify) {
      const QapInstance inst = read_instance_file(verify_dat);
      const DeclaredSolution sln = read_solution_file(verify_sln);
      out << "declared    " << sln.value << "\n";
      if (sln.perm.size() != inst.n) {
        out << "evaluated   (size " << sln.perm.size() << " does not match n=" << inst.n << ")\n";
        return exit_verify_mismatch;
      }
      const cost_t direct = evaluate(inst, sln.perm);
      if (direct == sln.value) {
        out << "evaluated   " << direct << "\norientation " << to_string(Orientation::as_published) << "\nOK\n";
        return exit_ok;
      }
      const cost_t swapped = evaluate(swap_roles(inst), sln.perm);
      if (swapped == sln.value) {
        out << "evaluated   " << swapped << "\norientation " << to_string(Orientation::roles_swapped) << "\nOK\n";
        return exit_ok;
      }
      out << "evaluated   " << direct << " (roles swapped: " << swapped << ")\nMISMATCH\n";
      return exit_verify_mismatch;
    }

    if (*heur) {
      const QapInstance inst = read_instance_file(heur_path);
      HeuristicConfig hc;
      hc.restarts = heur_restarts;
      hc.rng_seed = heur_seed;
      const HeuristicResult h = heuristic_ub(inst, hc);
      if (as_json) {
        json j = {{"instance", inst.name}, {"n", inst.n}, {"value", h.value}, {"permutation", h.perm.one_based()},
                  {"restarts", heur_restarts}, {"seed", heur_seed}};
        out << j.dump(2) << "\n";
      } else {
        out << to_solution_text(inst.n, h.value, h.perm);
      }
      return exit_ok;
    }

    if (*cap) {
      std::size_t n = 0;
      if (!cap_arg.empty() && cap_arg.find_first_not_of("0123456789") == std::string::npos) {
        n = std::stoul(cap_arg);
      } else {
        n = read_instance_file(cap_arg).n;
      }
      if (n < 3) {
        err << "capacity: n must be at least 3\n";
        return exit_input_error;
      }
      print_capacity(out, n, as_json);
      return exit_ok;
    }
  } catch (const CapacityError& e) {
    err << "capacity refusal: " << e.what() << "\n";
    print_capacity(err, static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(e.estimate.entries_B)))),
                   false);
    return exit_capacity;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_input_error;
  } catch (const CheckpointError& e) {
    err << "checkpoint error: " << e.what() << "\n";
    return exit_input_error;
  } catch (const CLI::Error& e) {
    err << e.what() << "\n";
    return exit_input_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_input_error;
  }
  return exit_input_error;
}

}  // namespace qaprlt
