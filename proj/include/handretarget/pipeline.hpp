#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "handretarget/config.hpp"
#include "handretarget/evaluator.hpp"
#include "handretarget/hybrid.hpp"
#include "handretarget/trajectory_io.hpp"

namespace handretarget {

/// Settings that drive the per-frame loop; a subset of RunConfig.
struct RetargetSettings {
  RetargetMode mode = RetargetMode::Hybrid;
  EnergyWeights weights;
  SwarmConfig swarm;
  IkConfig ik;
  double rate = 60.0;
  int refine_multiple = 2;

  static RetargetSettings from(const RunConfig& c);
};

/// Seed for one trajectory, derived from the run seed and the trajectory id
/// so results do not depend on processing order.
std::uint64_t trajectory_seed(std::uint64_t run_seed, const std::string& trajectory_id);

/// Retargets one stream frame by frame, stepping the scene after every
/// applied action. A failing frame aborts the trajectory with an error that
/// names the frame.
RecordedTrajectory run_retarget(const InputTrajectory& input, const HandModel& model, const SceneState& scene,
                                const RetargetSettings& settings);

/// Independent trajectories processed on up to `threads` workers; output
/// order follows input order.
std::vector<RecordedTrajectory> run_batch(const std::vector<InputTrajectory>& inputs, const HandModel& model,
                                          const SceneState& scene, const RetargetSettings& settings,
                                          unsigned threads = 0);

}  // namespace handretarget
