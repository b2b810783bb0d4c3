/* SPDX-License-Identifier: Apache-2.0 */

#include <qaprlt/report.hpp>

#include <json.hpp>

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace qaprlt {

using nlohmann::json;

namespace {

SolveStatus status_from(const std::string& s)
{
  if (s == "optimal") { return SolveStatus::optimal; }
  if (s == "ub_only") { return SolveStatus::ub_only; }
  if (s == "capped") { return SolveStatus::capped; }
  throw std::runtime_error("unknown status '" + s + "'");
}

// shortest text that reads back to the same double
std::string exact(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string report_to_json(const SolveReport& r)
{
  json j;
  j["schema"] = "qaprlt-report";
  j["schema_version"] = report_schema_version;
  j["instance"] = r.instance_name;
  j["n"] = r.n;
  j["status"] = std::string(to_string(r.status));
  j["value"] = r.value;
  j["permutation"] = r.perm.one_based();
  j["root_lb"] = r.root_lb;
  j["root_iterations"] = r.root_iterations;
  j["global_lb"] = r.global_lb;
  j["nodes_expanded"] = r.nodes_expanded;
  j["nodes_fathomed"] = r.nodes_fathomed;
  j["max_depth"] = r.max_depth;
  j["open_nodes"] = r.open_nodes;
  j["wall_seconds"] = r.wall_seconds;
  j["peak_tensor_bytes"] = r.peak_tensor_bytes;
  json traj = json::array();
  for (const TrajectoryPoint& p : r.trajectory) { traj.push_back({p.seconds, p.lb, p.ub}); }
  j["trajectory"] = std::move(traj);
  j["config"] = {{"k", r.k},
                 {"workers", r.workers},
                 {"seed", r.seed},
                 {"sb_iters", r.sb_iters},
                 {"warm_depth", r.warm_depth},
                 {"resumed", r.resumed}};
  return j.dump(2) + "\n";
}

std::string report_to_text(const SolveReport& r)
{
  std::ostringstream out;
  out << "instance          " << r.instance_name << " (n=" << r.n << ")\n";
  out << "status            " << to_string(r.status) << "\n";
  out << "value             " << r.value << "\n";
  out << "permutation      ";
  for (int v : r.perm.one_based()) { out << ' ' << v; }
  out << "\n";
  out << "root_lb           " << exact(r.root_lb) << "\n";
  out << "root_iterations   " << r.root_iterations << "\n";
  out << "global_lb         " << exact(r.global_lb) << "\n";
  out << "nodes_expanded    " << r.nodes_expanded << "\n";
  out << "nodes_fathomed    " << r.nodes_fathomed << "\n";
  out << "max_depth         " << r.max_depth << "\n";
  out << "open_nodes        " << r.open_nodes << "\n";
  out << "wall_seconds      " << exact(r.wall_seconds) << "\n";
  out << "peak_tensor_bytes " << r.peak_tensor_bytes << "\n";
  out << "k                 " << exact(r.k) << "\n";
  out << "workers           " << r.workers << "\n";
  out << "seed              " << r.seed << "\n";
  out << "sb_iters          " << r.sb_iters << "\n";
  out << "warm_depth        " << r.warm_depth << "\n";
  out << "resumed           " << (r.resumed ? "yes" : "no") << "\n";
  out << "trajectory        " << r.trajectory.size() << " samples\n";
  for (const TrajectoryPoint& p : r.trajectory) {
    out << "  " << exact(p.seconds) << ' ' << exact(p.lb) << ' ' << p.ub << "\n";
  }
  return out.str();
}

SolveReport report_from_json(std::string_view text)
{
  try {
    const json j = json::parse(text.begin(), text.end());
    if (j.at("schema").get<std::string>() != "qaprlt-report") { throw std::runtime_error("not a qaprlt report"); }
    if (j.at("schema_version").get<int>() != report_schema_version) {
      throw std::runtime_error("unsupported report schema version");
    }
    SolveReport r;
    r.instance_name = j.at("instance").get<std::string>();
    r.n = j.at("n").get<std::size_t>();
    r.status = status_from(j.at("status").get<std::string>());
    r.value = j.at("value").get<cost_t>();
    std::vector<int> p = j.at("permutation").get<std::vector<int>>();
    for (int& v : p) { --v; }
    r.perm = Permutation(std::move(p));
    r.root_lb = j.at("root_lb").get<double>();
    r.root_iterations = j.at("root_iterations").get<std::size_t>();
    r.global_lb = j.at("global_lb").get<double>();
    r.nodes_expanded = j.at("nodes_expanded").get<std::size_t>();
    r.nodes_fathomed = j.at("nodes_fathomed").get<std::size_t>();
    r.max_depth = j.at("max_depth").get<std::size_t>();
    r.open_nodes = j.at("open_nodes").get<std::size_t>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    r.peak_tensor_bytes = j.at("peak_tensor_bytes").get<std::uint64_t>();
    for (const json& p3 : j.at("trajectory")) {
      r.trajectory.push_back({p3.at(0).get<double>(), p3.at(1).get<double>(), p3.at(2).get<cost_t>()});
    }
    const json& c = j.at("config");
    r.k = c.at("k").get<double>();
    r.workers = c.at("workers").get<unsigned>();
    r.seed = c.at("seed").get<std::uint64_t>();
    r.sb_iters = c.at("sb_iters").get<std::size_t>();
    r.warm_depth = c.at("warm_depth").get<std::size_t>();
    r.resumed = c.at("resumed").get<bool>();
    return r;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed report: ") + e.what());
  }
}

}  // namespace qaprlt
