#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "handretarget/common.hpp"
#include "handretarget/pso.hpp"

using namespace handretarget;
using namespace handretarget::testing;

namespace {

double sphere(const Eigen::VectorXd& p) { return p.squaredNorm(); }

PsoStepParams params(Eigen::Index dim, double w = 0.7, double c1 = 1.5, double c2 = 1.5, double vmax = 0.2) {
  PsoStepParams p;
  p.inertia = w;
  p.c1 = c1;
  p.c2 = c2;
  p.v_max = Eigen::VectorXd::Constant(dim, vmax);
  return p;
}

std::vector<Eigen::VectorXd> uniform_swarm(Rng& rng, int n, Eigen::Index dim, double half) {
  std::vector<Eigen::VectorXd> out;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd v(dim);
    for (Eigen::Index d = 0; d < dim; ++d) v[d] = uniform(rng, -half, half);
    out.push_back(v);
  }
  return out;
}

Particle make_particle(const Eigen::VectorXd& pos, const Objective& f) {
  Particle p;
  p.position = pos;
  p.velocity = Eigen::VectorXd::Zero(pos.size());
  p.best_position = pos;
  p.best_fitness = f(pos);
  return p;
}

}  // namespace

TEST(PsoStep, FixedPointWithoutAttraction) {
  Rng rng(61);
  std::vector<Particle> ps{make_particle(Eigen::VectorXd::Constant(4, 0.3), sphere)};
  GlobalBest g{ps[0].position, ps[0].best_fitness, 0};
  for (int i = 0; i < 10; ++i) pso_step(ps, g, sphere, params(4, 1.0, 0.0, 0.0), rng);
  EXPECT_EQ(ps[0].position, Eigen::VectorXd::Constant(4, 0.3));
  EXPECT_EQ(g.fitness, sphere(ps[0].position));
}

TEST(PsoStep, MatchesHandComputedUpdate) {
  Rng rng(62);
  Rng replay = rng;
  Particle p = make_particle(Eigen::Vector3d(0.1, -0.2, 0.05), sphere);
  p.velocity = Eigen::Vector3d(0.01, 0.02, -0.03);
  p.best_position = Eigen::Vector3d(0.0, -0.1, 0.0);
  const Eigen::VectorXd g = Eigen::Vector3d(0.02, 0.0, 0.01);
  std::vector<Particle> ps{p};
  GlobalBest best{g, sphere(g), 0};
  pso_step(ps, best, sphere, params(3, 0.5, 1.2, 0.8, 0.05), replay);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int d = 0; d < 3; ++d) {
    const double r1 = unit(rng), r2 = unit(rng);
    double v = 0.5 * p.velocity[d] + 1.2 * r1 * (p.best_position[d] - p.position[d]) + 0.8 * r2 * (g[d] - p.position[d]);
    v = std::clamp(v, -0.05, 0.05);
    EXPECT_DOUBLE_EQ(ps[0].velocity[d], v);
    EXPECT_DOUBLE_EQ(ps[0].position[d], p.position[d] + v);
  }
}

TEST(PsoStep, VelocityIsClampedPerDimension) {
  Rng rng(63);
  const Objective f = [](const Eigen::VectorXd& x) { return (x - Eigen::VectorXd::Constant(x.size(), 100.0)).norm(); };
  auto init = uniform_swarm(rng, 10, 5, 1.0);
  std::vector<Particle> ps;
  for (auto& x : init) ps.push_back(make_particle(x, f));
  GlobalBest g{ps[0].position, std::numeric_limits<double>::infinity(), -1};
  PsoStepParams prm = params(5);
  prm.v_max << 0.01, 0.02, 0.03, 0.04, 0.05;
  for (int t = 0; t < 30; ++t) {
    pso_step(ps, g, f, prm, rng);
    for (const Particle& p : ps) {
      for (int d = 0; d < 5; ++d) EXPECT_LE(std::abs(p.velocity[d]), prm.v_max[d]);
    }
  }
}

TEST(PsoStep, NonFiniteFitnessResetsParticle) {
  Rng rng(64);
  const Objective f = [](const Eigen::VectorXd& x) {
    return x[0] > 0.5 ? std::numeric_limits<double>::quiet_NaN() : x.squaredNorm();
  };
  Particle p = make_particle(Eigen::Vector2d(0.45, 0.0), f);
  p.velocity = Eigen::Vector2d(0.2, 0.0);
  std::vector<Particle> ps{p};
  GlobalBest g{p.position, p.best_fitness, 0};
  pso_step(ps, g, f, params(2, 1.0, 0.0, 0.0, 1.0), rng);
  EXPECT_EQ(ps[0].position, p.best_position);
  EXPECT_EQ(ps[0].velocity, Eigen::VectorXd::Zero(2));
  EXPECT_EQ(g.fitness, p.best_fitness);
}

TEST(Swarm, SphereIn29Dimensions) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    const auto init = uniform_swarm(rng, 25, 29, 1.0);
    const SwarmResult r = run_swarm(init, sphere, params(29), 200, 1e-4, 0, rng);
    EXPECT_LT(r.best_fitness, 1e-3 * r.initial_best_fitness) << "seed " << seed;
    EXPECT_EQ(r.iterations_run, 200);
  }
}

TEST(Swarm, HistoryIsMonotoneAndConsistent) {
  Rng rng(65);
  const Objective rastrigin = [](const Eigen::VectorXd& x) {
    double s = 10.0 * static_cast<double>(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) s += x[i] * x[i] - 10.0 * std::cos(2 * M_PI * x[i]);
    return s;
  };
  const auto init = uniform_swarm(rng, 15, 8, 3.0);
  double initial_min = std::numeric_limits<double>::infinity();
  for (const auto& x : init) initial_min = std::min(initial_min, rastrigin(x));
  const SwarmResult r = run_swarm(init, rastrigin, params(8), 100, 1e-4, 0, rng);
  EXPECT_EQ(r.history.front(), initial_min);
  for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_LE(r.history[i], r.history[i - 1]);
  EXPECT_EQ(r.history.back(), r.best_fitness);
  EXPECT_DOUBLE_EQ(rastrigin(r.best_position), r.best_fitness);
}

TEST(Swarm, DeterministicForFixedSeed) {
  auto run = [] {
    Rng rng(66);
    const auto init = uniform_swarm(rng, 10, 6, 1.0);
    return run_swarm(init, sphere, params(6), 40, 1e-4, 0, rng);
  };
  const SwarmResult a = run(), b = run();
  EXPECT_EQ(a.best_position, b.best_position);
  EXPECT_EQ(a.history, b.history);
}

TEST(Swarm, EarlyExitOnStall) {
  Rng rng(67);
  const Objective flat = [](const Eigen::VectorXd&) { return 1.0; };
  const SwarmResult r = run_swarm(uniform_swarm(rng, 5, 3, 1.0), flat, params(3), 50, 1e-4, 3, rng);
  EXPECT_EQ(r.iterations_run, 3);
  EXPECT_TRUE(r.early_exit);

  const SwarmResult none = run_swarm(uniform_swarm(rng, 5, 3, 1.0), flat, params(3), 50, 1e-4, 0, rng);
  EXPECT_EQ(none.iterations_run, 50);
  EXPECT_FALSE(none.early_exit);
}

TEST(Swarm, ZeroIterationsReturnsBestInitial) {
  Rng rng(68);
  const auto init = uniform_swarm(rng, 7, 4, 1.0);
  std::size_t arg = 0;
  for (std::size_t i = 1; i < init.size(); ++i) {
    if (sphere(init[i]) < sphere(init[arg])) arg = i;
  }
  const SwarmResult r = run_swarm(init, sphere, params(4), 0, 1e-4, 1, rng);
  EXPECT_EQ(r.best_position, init[arg]);
  EXPECT_EQ(r.iterations_run, 0);
}

TEST(Swarm, EmptySwarmThrows) {
  Rng rng(69);
  EXPECT_THROW(run_swarm({}, sphere, params(2), 5, 1e-4, 1, rng), ConfigError);
}

TEST(SwarmConfig, ParsingAndValidation) {
  const SwarmConfig c = parse_swarm_config({{"swarm_size", 100}, {"iterations", 100}, {"anchor_initializer", true}});
  EXPECT_EQ(c.swarm_size, 100);
  EXPECT_TRUE(c.anchor_initializer);
  EXPECT_EQ(parse_swarm_config(to_json(c)).iterations, 100);
  EXPECT_THROW(parse_swarm_config({{"swarm_size", 0}}), ConfigError);
  EXPECT_THROW(parse_swarm_config({{"iterations", "many"}}), ConfigError);
  EXPECT_THROW(parse_swarm_config({{"v_max_fraction", 0.0}}), ConfigError);
}
