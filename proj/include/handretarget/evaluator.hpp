#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "handretarget/hand_model.hpp"
#include "handretarget/scene.hpp"

namespace handretarget {

/// Everything recorded for one retargeted frame.
struct FrameRecord {
  double timestamp = 0.0;
  Skeleton source;  // x, as received
  ActuatorVector actuators = ActuatorVector::Zero();
  Skeleton simulated;  // y
  Vec3 palm_center = Vec3::Zero();
  ContactSet contacts;
  SceneState scene;  // after the step
};

struct RecordedTrajectory {
  std::string id;
  double dt = 1.0 / 60.0;
  std::vector<FrameRecord> frames;
};

struct LiftingThresholds {
  double above_table_margin = 0.005;  // m above the table
  double palm_distance = 0.2;         // m, object center to palm center
  double lift_height = 0.17;          // m above the initial height
};

struct TrajectoryMetrics {
  std::optional<std::size_t> soi_start;
  double lifting_ratio = 0.0;
  bool success = false;
  double max_lift_height = 0.0;
};

/// First frame where at least two of the six contact points touch the
/// object (distance <= the scene's contact epsilon).
std::optional<std::size_t> sequence_of_interest(std::span<const FrameRecord> frames);

/// (a) object above the table, (b) palm center near the object center,
/// (c) at least one contact point not missing.
bool is_lifting_frame(const FrameRecord& frame, double table_height, const LiftingThresholds& t = {});

/// Lifting frames over frames from the sequence-of-interest start onward.
double lifting_ratio(std::span<const FrameRecord> frames, const LiftingThresholds& t = {});

/// Held in the air in the last frame, or lifted above `lift_height` at some point.
bool is_success(std::span<const FrameRecord> frames, const LiftingThresholds& t = {});

TrajectoryMetrics evaluate_trajectory(std::span<const FrameRecord> frames, const LiftingThresholds& t = {});

nlohmann::json to_json(const TrajectoryMetrics& m);

}  // namespace handretarget
