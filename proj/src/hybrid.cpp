#include "handretarget/hybrid.hpp"

namespace handretarget {

HandContactPoints contact_points(const HandPose& pose) {
  HandContactPoints h;
  h.palm = pose.palm_center;
  for (std::size_t f = 0; f < kFingers; ++f) h.fingertips[f] = pose.fingertip(f);
  h.palm_frame = pose.palm_frame;
  return h;
}

FrameObjective::FrameObjective(const HandModel& model, const SceneState& snapshot, const EnergyWeights& weights,
                               double dt, const PoseTarget* target)
    : model_(model), snapshot_(snapshot), weights_(weights), dt_(dt), target_(target) {
  if (!target_) {
    weights_.pose = 0.0;
    weights_.task = 1.0;
  }
}

FrameObjective::Evaluation FrameObjective::evaluate(const ActuatorVector& a) const {
  Evaluation ev;
  ev.pose = model_.forward(a);
  const HandContactPoints hand = contact_points(ev.pose);
  ev.scene = step_scene(snapshot_, hand, dt_);
  ev.contacts = contact_distances(hand, ev.scene, weights_.d_max, weights_.omega_cost);
  if (target_ && weights_.pose != 0.0) ev.pose_energy = target_->e_pose(ev.pose.skeleton, weights_);
  if (weights_.task != 0.0) ev.task_energy = e_task(ev.contacts, weights_);
  ev.fitness = weights_.pose * ev.pose_energy + weights_.task * ev.task_energy;
  return ev;
}

HybridResult optimize_around(const ActuatorVector& start, const FrameObjective& objective, const HandModel& model,
                             const SwarmConfig& cfg, Rng& rng) {
  cfg.validate();
  const ActuatorVector ranges = model.action_ranges();
  const Eigen::VectorXd delta = cfg.init_noise_fraction * ranges;

  std::vector<Eigen::VectorXd> initial;
  initial.reserve(static_cast<std::size_t>(cfg.swarm_size));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int i = 0; i < cfg.swarm_size; ++i) {
    Eigen::VectorXd p = start;
    if (i > 0 || !cfg.anchor_initializer) {
      for (Eigen::Index d = 0; d < p.size(); ++d) p[d] += delta[d] * unit(rng);
    }
    initial.push_back(std::move(p));
  }

  PsoStepParams params;
  params.inertia = cfg.inertia;
  params.c1 = cfg.c1;
  params.c2 = cfg.c2;
  params.v_max = cfg.v_max_fraction * ranges;

  const Objective f = [&](const Eigen::VectorXd& p) { return objective(ActuatorVector(p)); };

  HybridResult out;
  out.initial = start;
  out.swarm = run_swarm(std::move(initial), f, params, cfg.iterations, cfg.min_fitness_step, cfg.stall_iterations,
                        rng);
  out.action = model.clamp(ActuatorVector(out.swarm.best_position));
  out.fitness = out.swarm.best_fitness;
  out.initial_fitness = objective(start);
  return out;
}

HybridResult hybrid_pso(const Skeleton& x, const SceneState& scene, const HandModel& model,
                        const EnergyWeights& weights, const SwarmConfig& swarm, const IkConfig& ik,
                        const std::optional<ActuatorVector>& prev, double dt, Rng& rng) {
  const PoseTarget target(x, model.bone_lengths());
  const ActuatorVector start = ik_retarget(target.scaled(), model, prev, ik);
  const FrameObjective objective(model, scene, weights, dt, &target);
  return optimize_around(start, objective, model, swarm, rng);
}

HybridResult task_refine(const SceneState& scene, const ActuatorVector& current, const HandModel& model,
                         const EnergyWeights& weights, const SwarmConfig& swarm, double dt, Rng& rng) {
  const FrameObjective objective(model, scene, weights, dt, nullptr);
  return optimize_around(current, objective, model, swarm, rng);
}

}  // namespace handretarget
