#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <json.hpp>

#include <Eigen/Core>

namespace handretarget {

using Rng = std::mt19937_64;

/// Swarm hyperparameters. Per-dimension motion bounds are given as fractions
/// of each dimension's search range; see HandModel::action_ranges().
struct SwarmConfig {
  int swarm_size = 25;
  int iterations = 50;
  double c1 = 1.5;
  double c2 = 1.5;
  double inertia = 0.7;
  double v_max_fraction = 0.10;
  double init_noise_fraction = 0.05;
  double min_fitness_step = 1e-4;
  /// Consecutive iterations with improvement below min_fitness_step that end
  /// the run; 0 disables early termination.
  int stall_iterations = 1;
  /// Place particle 0 exactly on the initializer instead of perturbing it,
  /// so the result can never score worse than the initializer itself.
  bool anchor_initializer = false;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

SwarmConfig parse_swarm_config(const nlohmann::json& doc);
nlohmann::json to_json(const SwarmConfig& c);

struct Particle {
  Eigen::VectorXd position;
  Eigen::VectorXd velocity;
  Eigen::VectorXd best_position;
  double best_fitness = 0.0;
};

struct GlobalBest {
  Eigen::VectorXd position;
  double fitness = 0.0;
  int particle = -1;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

struct PsoStepParams {
  double inertia = 0.7;
  double c1 = 1.5;
  double c2 = 1.5;
  Eigen::VectorXd v_max;  // per dimension, > 0
};

/// One synchronous swarm iteration:
///   v <- w v + c1 r1 (p_best - p) + c2 r2 (g_best - p),  |v_d| <= v_max_d
///   p <- p + v
/// with r1, r2 componentwise uniform on [0, 1). Personal and global bests
/// move only on strictly lower fitness; the global reduction scans particles
/// in index order so ties keep the incumbent. A non-finite fitness sends the
/// particle back to its personal best with zero velocity.
void pso_step(std::vector<Particle>& particles, GlobalBest& global_best, const Objective& objective,
              const PsoStepParams& params, Rng& rng);

struct SwarmResult {
  Eigen::VectorXd best_position;
  double best_fitness = 0.0;
  double initial_best_fitness = 0.0;
  std::vector<double> history;  // global best after init and after each iteration
  int iterations_run = 0;
  bool early_exit = false;
};

/// Evaluates `initial` positions, then iterates pso_step. Throws if the
/// global best ever increases.
SwarmResult run_swarm(std::vector<Eigen::VectorXd> initial, const Objective& objective, const PsoStepParams& params,
                      int iterations, double min_fitness_step, int stall_iterations, Rng& rng);

}  // namespace handretarget
