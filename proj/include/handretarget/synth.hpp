#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "handretarget/hand_model.hpp"
#include "handretarget/scene.hpp"
#include "handretarget/trajectory_io.hpp"

namespace handretarget {

struct SynthOptions {
  std::size_t count = 10;
  double sigma = 0.0;  // m, per coordinate
  std::uint64_t seed = 0;
  double domain_scale = 1.1;
  double rate = 60.0;
};

/// Clean actuator script of one reach-close-lift motion plus the skeleton
/// streams derived from it.
struct SynthTrajectory {
  std::vector<ActuatorVector> script;
  InputTrajectory clean;  // domain-scaled, noise free
  InputTrajectory noisy;
};

/// Closed-hand pose resting on the object, found by lowering the palm onto
/// the object and curling each finger until it first touches.
struct GraspPose {
  ActuatorVector grasp = ActuatorVector::Zero();
  ActuatorVector open = ActuatorVector::Zero();  // same palm placement, fingers extended
  std::size_t touching_tips = 0;
};

/// Throws GenerationError when no placement gives a grasp that holds.
GraspPose find_grasp(const SceneState& scene, const HandModel& model, double yaw);

std::vector<SynthTrajectory> synth_generate_detailed(const SceneState& scene, const HandModel& model,
                                                     const SynthOptions& opt);

std::vector<InputTrajectory> synth_generate(const SceneState& scene, const HandModel& model,
                                            const SynthOptions& opt);

}  // namespace handretarget
