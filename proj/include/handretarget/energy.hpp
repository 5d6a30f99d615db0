#pragma once

#include <array>

#include <json.hpp>

#include "handretarget/hand_model.hpp"
#include "handretarget/scene.hpp"

namespace handretarget {

/// Weights of the retargeting fitness. Defaults: thumb tip 10, other tips 3,
/// all other joints 1; palm 3, fingertips 1; missing-point cost 2 at a 4 cm
/// detection radius; task/pose mix 0.8/0.2 with an even position/angle split.
struct EnergyWeights {
  double pose = 0.2;
  double task = 0.8;
  double position = 0.5;
  double angle = 0.5;
  std::array<double, kSkeletonPoints> joint{};
  double palm = 3.0;
  double fingertip = 1.0;
  double omega_cost = 2.0;
  double d_max = 0.04;

  EnergyWeights();

  /// Rescales (pose, task) and (position, angle) to sum to one. Throws
  /// ConfigError on negative weights, zero sums or d_max <= 0.
  EnergyWeights normalized() const;
  void validate() const;
};

EnergyWeights parse_energy_weights(const nlohmann::json& doc);
nlohmann::json to_json(const EnergyWeights& w);

/// Weighted, span-normalized mean squared point error. `x_scaled` must
/// already be in the model's domain.
double e_position(const Skeleton& x_scaled, const Skeleton& y,
                  const std::array<double, kSkeletonPoints>& joint_weights);

/// Mean squared relative-angle error, normalized by pi. In [0, 1].
double e_angle(const Skeleton& x, const Skeleton& y);

/// Pose energy: position term on the scale-normalized source plus angle term.
double e_pose(const Skeleton& x, const Skeleton& y, const EnergyWeights& w);

/// Task energy over palm + fingertip distances. Throws ConfigError when the
/// contact set was built with different d_max / omega_cost.
double e_task(const ContactSet& contacts, const EnergyWeights& w);

double fitness(const Skeleton& x, const Skeleton& y, const ContactSet& contacts, const EnergyWeights& w);

/// Per-frame precomputation of everything that depends only on the source
/// skeleton `x`; evaluates the same quantities as e_pose / fitness.
class PoseTarget {
 public:
  PoseTarget(const Skeleton& x, const std::array<double, kBones>& model_bone_lengths);

  const Skeleton& source() const { return x_; }
  const Skeleton& scaled() const { return x_scaled_; }
  double scale() const { return scale_; }

  double e_position(const Skeleton& y, const std::array<double, kSkeletonPoints>& joint_weights) const;
  double e_angle(const Skeleton& y) const;
  double e_pose(const Skeleton& y, const EnergyWeights& w) const;

 private:
  Skeleton x_;
  Skeleton x_scaled_;
  double scale_ = 1.0;
  double span_scaled_ = 0.0;
  JointAngles angles_{};
};

}  // namespace handretarget
