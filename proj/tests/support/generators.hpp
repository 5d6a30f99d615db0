#pragma once

#include <random>

#include "handretarget/hand_model.hpp"
#include "handretarget/pso.hpp"

namespace handretarget::testing {

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline Vec3 random_unit(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(n(rng), n(rng), n(rng));
  } while (v.norm() < 1e-6);
  return v.normalized();
}

inline Mat3 random_rotation(Rng& rng) {
  return Eigen::AngleAxisd(uniform(rng, -3.1, 3.1), random_unit(rng)).toRotationMatrix();
}

inline Eigen::Isometry3d random_rigid(Rng& rng, double translation = 0.5) {
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  t.linear() = random_rotation(rng);
  t.translation() = Vec3(uniform(rng, -translation, translation), uniform(rng, -translation, translation),
                         uniform(rng, -translation, translation));
  return t;
}

/// Hand-shaped but otherwise arbitrary: every bone 1 to 6 cm in a random
/// direction, so no bone is degenerate.
inline Skeleton random_skeleton(Rng& rng) {
  Skeleton s;
  s[kWrist] = Vec3(uniform(rng, -0.3, 0.3), uniform(rng, -0.3, 0.3), uniform(rng, -0.3, 0.3));
  for (std::size_t f = 0; f < kFingers; ++f) {
    Vec3 prev = s[kWrist];
    for (std::size_t j = 0; j < 4; ++j) {
      prev = prev + uniform(rng, 0.01, 0.06) * random_unit(rng);
      s[point_index(f, j)] = prev;
    }
  }
  return s;
}

/// Joint actuators uniform inside their limits shrunk by `margin` of the
/// range on each side; global translation within +-0.2 m and rotation away
/// from gimbal lock.
inline ActuatorVector random_action(const HandModel& model, Rng& rng, double margin = 0.0) {
  ActuatorVector a;
  for (int i = 0; i < 3; ++i) a[i] = uniform(rng, -0.2, 0.2);
  a[3] = uniform(rng, -3.0, 3.0);
  a[4] = uniform(rng, -1.2, 1.2);
  a[5] = uniform(rng, -3.0, 3.0);
  for (std::size_t j = 0; j < kJointActuators; ++j) {
    const double lo = model.lower(j), hi = model.upper(j), m = margin * (hi - lo);
    a[kGlobalDofs + j] = uniform(rng, lo + m, hi - m);
  }
  return a;
}

}  // namespace handretarget::testing
