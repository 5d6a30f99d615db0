#pragma once

#include <string>

#include <json.hpp>

#include "handretarget/energy.hpp"
#include "handretarget/ik.hpp"
#include "handretarget/pso.hpp"

namespace handretarget {

enum class RetargetMode { Ik, Hybrid, HybridRefine };

RetargetMode parse_mode(const std::string& s);
std::string to_string(RetargetMode m);

/// Run configuration file. Relative paths are resolved against the
/// directory of the config file.
struct RunConfig {
  std::string hand_spec;
  std::string scene;
  EnergyWeights weights;
  SwarmConfig swarm;
  IkConfig ik;
  RetargetMode mode = RetargetMode::Hybrid;
  double rate = 60.0;      // frames per second of the input stream
  int refine_multiple = 2;  // task-only refinement passes per input frame
  std::string output_dir = "out";

  double dt() const { return 1.0 / rate; }
  void validate() const;
};

RunConfig parse_run_config(const nlohmann::json& doc, const std::string& base_dir = "");
RunConfig load_run_config(const std::string& path);
nlohmann::json to_json(const RunConfig& c);

}  // namespace handretarget
