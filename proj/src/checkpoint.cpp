/* SPDX-License-Identifier: Apache-2.0 */

#include <qaprlt/checkpoint.hpp>

#include <json.hpp>

#include <fstream>
#include <iterator>
#include <sstream>

namespace qaprlt {

using nlohmann::json;

std::string checkpoint_save(const Checkpoint& cp)
{
  json j;
  j["format"] = "qaprlt-checkpoint";
  j["format_version"] = checkpoint_format_version;
  j["instance_digest"] = cp.instance_digest;
  j["n"] = cp.n;
  j["incumbent"]["value"] = cp.incumbent_value;
  j["incumbent"]["perm"] = cp.incumbent_perm ? json(cp.incumbent_perm->one_based()) : json(nullptr);
  json open = json::array();
  for (const OpenNode& node : cp.open) {
    json fixed = json::array();
    for (const Assignment& a : node.fixed) { fixed.push_back({a.facility + 1, a.location + 1}); }
    open.push_back({{"fixed", std::move(fixed)}, {"lb", node.lb}});
  }
  j["open_nodes"] = std::move(open);
  j["stats"] = {{"nodes_expanded", cp.nodes_expanded},
                {"nodes_fathomed", cp.nodes_fathomed},
                {"max_depth", cp.max_depth},
                {"elapsed_seconds", cp.elapsed_seconds},
                {"root_lb", cp.root_lb},
                {"root_done", cp.root_done}};
  return j.dump(1) + "\n";
}

Checkpoint checkpoint_load(std::string_view text, const QapInstance& inst)
{
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw CheckpointError(CheckpointError::Kind::malformed, std::string("truncated or malformed checkpoint: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "qaprlt-checkpoint") {
      throw CheckpointError(CheckpointError::Kind::malformed, "not a qaprlt checkpoint");
    }
    const int version = j.at("format_version").get<int>();
    if (version != checkpoint_format_version) {
      throw CheckpointError(CheckpointError::Kind::version_mismatch,
                            "checkpoint format version " + std::to_string(version) + " is not supported (expected " +
                              std::to_string(checkpoint_format_version) + ")");
    }
    Checkpoint cp;
    cp.instance_digest = j.at("instance_digest").get<std::string>();
    const std::string expected = instance_digest(inst);
    if (cp.instance_digest != expected) {
      throw CheckpointError(CheckpointError::Kind::digest_mismatch,
                            "checkpoint belongs to instance " + cp.instance_digest + ", not " + expected);
    }
    cp.n = j.at("n").get<std::size_t>();
    if (cp.n != inst.n) { throw CheckpointError(CheckpointError::Kind::malformed, "checkpoint size mismatch"); }
    cp.incumbent_value = j.at("incumbent").at("value").get<cost_t>();
    const json& perm = j.at("incumbent").at("perm");
    if (!perm.is_null()) {
      std::vector<int> p = perm.get<std::vector<int>>();
      for (int& v : p) { --v; }
      if (p.size() != inst.n || !is_bijection(p)) {
        throw CheckpointError(CheckpointError::Kind::malformed, "checkpoint incumbent is not a permutation");
      }
      cp.incumbent_perm = Permutation(std::move(p));
    }
    for (const json& node : j.at("open_nodes")) {
      OpenNode on;
      on.lb = node.at("lb").get<double>();
      for (const json& pair : node.at("fixed")) {
        const int f = pair.at(0).get<int>() - 1;
        const int l = pair.at(1).get<int>() - 1;
        if (f < 0 || l < 0 || static_cast<std::size_t>(f) >= inst.n || static_cast<std::size_t>(l) >= inst.n) {
          throw CheckpointError(CheckpointError::Kind::malformed, "checkpoint assignment out of range");
        }
        on.fixed.push_back({f, l});
      }
      cp.open.push_back(std::move(on));
    }
    const json& stats = j.at("stats");
    cp.nodes_expanded = stats.at("nodes_expanded").get<std::size_t>();
    cp.nodes_fathomed = stats.at("nodes_fathomed").get<std::size_t>();
    cp.max_depth = stats.at("max_depth").get<std::size_t>();
    cp.elapsed_seconds = stats.at("elapsed_seconds").get<double>();
    cp.root_lb = stats.at("root_lb").get<double>();
    cp.root_done = stats.at("root_done").get<bool>();
    return cp;
  } catch (const json::exception& e) {
    throw CheckpointError(CheckpointError::Kind::malformed, std::string("malformed checkpoint: ") + e.what());
  }
}

void write_checkpoint_file(const std::filesystem::path& path, const Checkpoint& cp)
{
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) { throw CheckpointError(CheckpointError::Kind::io, "cannot write checkpoint " + tmp.string()); }
    out << checkpoint_save(cp);
    out.flush();
    if (!out) { throw CheckpointError(CheckpointError::Kind::io, "failed writing checkpoint " + tmp.string()); }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) { throw CheckpointError(CheckpointError::Kind::io, "cannot move checkpoint into place: " + ec.message()); }
}

Checkpoint read_checkpoint_file(const std::filesystem::path& path, const QapInstance& inst)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) { throw CheckpointError(CheckpointError::Kind::io, "cannot open checkpoint " + path.string()); }
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return checkpoint_load(text, inst);
}

}  // namespace qaprlt
