#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "handretarget/evaluator.hpp"

namespace handretarget {

inline constexpr std::size_t kStateDim = 3 + 3 + kJointActuators + kJointActuators + kFingers;

/// [hand - object position (3), hand - object velocity (3), joint angles (23),
///  joint velocities (23), fingertip contact distances (5)].
struct StateVector {
  std::array<double, kStateDim> values{};

  static constexpr std::size_t kRelPos = 0;
  static constexpr std::size_t kRelVel = 3;
  static constexpr std::size_t kJointAngles = 6;
  static constexpr std::size_t kJointVels = kJointAngles + kJointActuators;
  static constexpr std::size_t kContact = kJointVels + kJointActuators;

  Vec3 rel_pos() const { return {values[0], values[1], values[2]}; }
  Vec3 rel_vel() const { return {values[3], values[4], values[5]}; }
  double joint_angle(std::size_t j) const { return values[kJointAngles + j]; }
  double joint_vel(std::size_t j) const { return values[kJointVels + j]; }
  double contact(std::size_t f) const { return values[kContact + f]; }

  bool operator==(const StateVector&) const = default;
};

struct DemoFrame {
  StateVector state;
  ActuatorVector action = ActuatorVector::Zero();
  double timestamp = 0.0;

  bool operator==(const DemoFrame& o) const {
    return state == o.state && action == o.action && timestamp == o.timestamp;
  }
};

struct DemoTrajectory {
  std::string id;
  std::vector<DemoFrame> frames;
};

/// Hand position is the palm center; velocities are backward differences
/// (zero without a predecessor); contact distances are the raw fingertip
/// distances clamped at omega_cost * d_max.
StateVector extract_state(const FrameRecord& frame, const FrameRecord* prev, double dt);

DemoTrajectory build_demo(const RecordedTrajectory& trajectory);

struct DemoDataset {
  nlohmann::json header;
  std::vector<DemoTrajectory> trajectories;
};

/// Writes a JSON Lines dataset: one header line, then one line per frame
/// {traj_id, t, state[57], action[29]}. Every trajectory must be a success.
/// Throws ValidationError or IoError.
void export_demos(std::span<const RecordedTrajectory> trajectories, const std::string& path,
                  const nlohmann::json& header_info = nlohmann::json::object());

DemoDataset import_demos(const std::string& path);

}  // namespace handretarget
