#include "handretarget/config.hpp"

#include <filesystem>
#include <fstream>

namespace handretarget {

using nlohmann::json;
namespace fs = std::filesystem;

RetargetMode parse_mode(const std::string& s) {
  if (s == "ik") return RetargetMode::Ik;
  if (s == "hybrid") return RetargetMode::Hybrid;
  if (s == "hybrid+refine") return RetargetMode::HybridRefine;
  throw ConfigError("unknown mode '" + s + "' (expected ik, hybrid or hybrid+refine)");
}

std::string to_string(RetargetMode m) {
  switch (m) {
    case RetargetMode::Ik:
      return "ik";
    case RetargetMode::Hybrid:
      return "hybrid";
    case RetargetMode::HybridRefine:
      return "hybrid+refine";
  }
  return "unknown";
}

void RunConfig::validate() const {
  if (!(rate > 0.0)) throw ConfigError("rate must be > 0");
  if (refine_multiple < 1) throw ConfigError("refine_multiple must be >= 1");
  weights.validate();
  swarm.validate();
  ik.validate();
}

namespace {

std::string resolve(const std::string& base, const std::string& p) {
  if (p.empty() || base.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base) / p).lexically_normal().string();
}

}  // namespace

RunConfig parse_run_config(const json& doc, const std::string& base_dir) {
  RunConfig c;
  try {
    c.hand_spec = resolve(base_dir, doc.value("hand_spec", std::string()));
    c.scene = resolve(base_dir, doc.value("scene", std::string()));
    if (doc.contains("weights")) c.weights = parse_energy_weights(doc["weights"]);
    if (doc.contains("swarm")) c.swarm = parse_swarm_config(doc["swarm"]);
    if (doc.contains("ik")) c.ik = parse_ik_config(doc["ik"]);
    if (doc.contains("mode")) c.mode = parse_mode(doc["mode"].get<std::string>());
    c.rate = doc.value("rate", c.rate);
    c.refine_multiple = doc.value("refine_multiple", c.refine_multiple);
    c.output_dir = resolve(base_dir, doc.value("output_dir", c.output_dir));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("run config: ") + e.what());
  }
  c.weights = c.weights.normalized();
  c.validate();
  if (c.hand_spec.empty() || !fs::exists(c.hand_spec)) throw ConfigError("hand_spec file not found: " + c.hand_spec);
  if (c.scene.empty() || !fs::exists(c.scene)) throw ConfigError("scene file not found: " + c.scene);
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_run_config(doc, fs::path(path).parent_path().string());
}

json to_json(const RunConfig& c) {
  return {{"hand_spec", c.hand_spec},          {"scene", c.scene},       {"weights", to_json(c.weights)},
          {"swarm", to_json(c.swarm)},         {"ik", to_json(c.ik)},    {"mode", to_string(c.mode)},
          {"rate", c.rate},                    {"refine_multiple", c.refine_multiple},
          {"output_dir", c.output_dir}};
}

}  // namespace handretarget
