#include "handretarget/pso.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "handretarget/common.hpp"

namespace handretarget {

using nlohmann::json;

void SwarmConfig::validate() const {
  if (swarm_size < 1) throw ConfigError("swarm.swarm_size must be >= 1");
  if (iterations < 0) throw ConfigError("swarm.iterations must be >= 0");
  if (!(min_fitness_step > 0.0)) throw ConfigError("swarm.min_fitness_step must be > 0");
  if (!(v_max_fraction > 0.0)) throw ConfigError("swarm.v_max_fraction must be > 0");
  if (!(init_noise_fraction >= 0.0)) throw ConfigError("swarm.init_noise_fraction must be >= 0");
  if (stall_iterations < 0) throw ConfigError("swarm.stall_iterations must be >= 0");
  if (!(c1 >= 0.0 && c2 >= 0.0 && inertia >= 0.0)) throw ConfigError("swarm coefficients must be >= 0");
}

SwarmConfig parse_swarm_config(const json& doc) {
  SwarmConfig c;
  try {
    c.swarm_size = doc.value("swarm_size", c.swarm_size);
    c.iterations = doc.value("iterations", c.iterations);
    c.c1 = doc.value("c1", c.c1);
    c.c2 = doc.value("c2", c.c2);
    c.inertia = doc.value("inertia", c.inertia);
    c.v_max_fraction = doc.value("v_max_fraction", c.v_max_fraction);
    c.init_noise_fraction = doc.value("init_noise_fraction", c.init_noise_fraction);
    c.min_fitness_step = doc.value("min_fitness_step", c.min_fitness_step);
    c.stall_iterations = doc.value("stall_iterations", c.stall_iterations);
    c.anchor_initializer = doc.value("anchor_initializer", c.anchor_initializer);
    c.rng_seed = doc.value("rng_seed", c.rng_seed);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("swarm: ") + e.what());
  }
  c.validate();
  return c;
}

json to_json(const SwarmConfig& c) {
  return {{"swarm_size", c.swarm_size},
          {"iterations", c.iterations},
          {"c1", c.c1},
          {"c2", c.c2},
          {"inertia", c.inertia},
          {"v_max_fraction", c.v_max_fraction},
          {"init_noise_fraction", c.init_noise_fraction},
          {"min_fitness_step", c.min_fitness_step},
          {"stall_iterations", c.stall_iterations},
          {"anchor_initializer", c.anchor_initializer},
          {"rng_seed", c.rng_seed}};
}

void pso_step(std::vector<Particle>& particles, GlobalBest& global_best, const Objective& objective,
              const PsoStepParams& params, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Eigen::VectorXd g = global_best.position;  // synchronous: every particle sees the same g_best

  for (Particle& p : particles) {
    const Eigen::Index n = p.position.size();
    for (Eigen::Index d = 0; d < n; ++d) {
      const double r1 = unit(rng);
      const double r2 = unit(rng);
      double v = params.inertia * p.velocity[d] + params.c1 * r1 * (p.best_position[d] - p.position[d]) +
                 params.c2 * r2 * (g[d] - p.position[d]);
      const double vmax = params.v_max[d];
      if (v > vmax) v = vmax;
      if (v < -vmax) v = -vmax;
      p.velocity[d] = v;
    }
    p.position += p.velocity;

    const double f = objective(p.position);
    if (!std::isfinite(f)) {
      p.position = p.best_position;
      p.velocity.setZero();
      continue;
    }
    if (f < p.best_fitness) {
      p.best_fitness = f;
      p.best_position = p.position;
    }
  }

  for (std::size_t i = 0; i < particles.size(); ++i) {
    if (particles[i].best_fitness < global_best.fitness) {
      global_best.fitness = particles[i].best_fitness;
      global_best.position = particles[i].best_position;
      global_best.particle = static_cast<int>(i);
    }
  }
}

SwarmResult run_swarm(std::vector<Eigen::VectorXd> initial, const Objective& objective, const PsoStepParams& params,
                      int iterations, double min_fitness_step, int stall_iterations, Rng& rng) {
  if (initial.empty()) throw ConfigError("run_swarm: empty swarm");
  std::vector<Particle> particles;
  particles.reserve(initial.size());
  GlobalBest best;
  best.fitness = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < initial.size(); ++i) {
    Particle p;
    p.position = std::move(initial[i]);
    p.velocity = Eigen::VectorXd::Zero(p.position.size());
    p.best_position = p.position;
    const double f = objective(p.position);
    p.best_fitness = std::isfinite(f) ? f : std::numeric_limits<double>::infinity();
    if (p.best_fitness < best.fitness || best.particle < 0) {
      best.fitness = p.best_fitness;
      best.position = p.best_position;
      best.particle = static_cast<int>(i);
    }
    particles.push_back(std::move(p));
  }

  SwarmResult result;
  result.initial_best_fitness = best.fitness;
  result.history.push_back(best.fitness);
  int stalled = 0;
  for (int t = 0; t < iterations; ++t) {
    const double before = best.fitness;
    pso_step(particles, best, objective, params, rng);
    ++result.iterations_run;
    if (best.fitness > before) throw std::logic_error("run_swarm: global best increased");
    result.history.push_back(best.fitness);
    const double improvement = before - best.fitness;
    if (stall_iterations > 0 && !(improvement >= min_fitness_step)) {
      if (++stalled >= stall_iterations) {
        result.early_exit = t + 1 < iterations;
        break;
      }
    } else {
      stalled = 0;
    }
  }
  result.best_position = best.position;
  result.best_fitness = best.fitness;
  return result;
}

}  // namespace handretarget
