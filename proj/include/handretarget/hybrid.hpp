#pragma once

#include <optional>

#include "handretarget/energy.hpp"
#include "handretarget/hand_model.hpp"
#include "handretarget/ik.hpp"
#include "handretarget/pso.hpp"
#include "handretarget/scene.hpp"

namespace handretarget {

HandContactPoints contact_points(const HandPose& pose);

/// Scores an action against one frame: the action is applied to a private
/// copy of the scene snapshot (forward kinematics, one scene step), then the
/// pose and task energies are taken from the simulated hand. A null target
/// means task-only scoring.
class FrameObjective {
 public:
  FrameObjective(const HandModel& model, const SceneState& snapshot, const EnergyWeights& weights, double dt,
                 const PoseTarget* target);

  struct Evaluation {
    HandPose pose;
    SceneState scene;
    ContactSet contacts;
    double pose_energy = 0.0;
    double task_energy = 0.0;
    double fitness = 0.0;
  };

  Evaluation evaluate(const ActuatorVector& a) const;
  double operator()(const ActuatorVector& a) const { return evaluate(a).fitness; }

 private:
  const HandModel& model_;
  const SceneState& snapshot_;
  EnergyWeights weights_;
  double dt_;
  const PoseTarget* target_;
};

struct HybridResult {
  ActuatorVector action = ActuatorVector::Zero();
  ActuatorVector initial = ActuatorVector::Zero();  // IK pose, or the refined starting pose
  double fitness = 0.0;
  double initial_fitness = 0.0;
  SwarmResult swarm;
};

/// Swarm around `start`: particles sit on `start` plus componentwise
/// uniform(-delta, delta) noise (particle 0 exactly on `start` when the
/// config anchors the initializer); velocities start at zero and are clamped
/// per dimension.
HybridResult optimize_around(const ActuatorVector& start, const FrameObjective& objective, const HandModel& model,
                             const SwarmConfig& cfg, Rng& rng);

/// IK initialization followed by localized swarm search on the full fitness.
HybridResult hybrid_pso(const Skeleton& x, const SceneState& scene, const HandModel& model,
                        const EnergyWeights& weights, const SwarmConfig& swarm, const IkConfig& ik,
                        const std::optional<ActuatorVector>& prev, double dt, Rng& rng);

/// Task-only micro-correction around `current`, using the environment alone.
HybridResult task_refine(const SceneState& scene, const ActuatorVector& current, const HandModel& model,
                         const EnergyWeights& weights, const SwarmConfig& swarm, double dt, Rng& rng);

}  // namespace handretarget
