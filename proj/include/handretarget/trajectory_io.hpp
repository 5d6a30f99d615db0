#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "handretarget/evaluator.hpp"

namespace handretarget {

struct InputFrame {
  double timestamp = 0.0;
  Skeleton joints;
};

/// A human hand stream: one 21-point skeleton per frame, timestamps strictly
/// increasing.
struct InputTrajectory {
  std::string id;
  std::vector<InputFrame> frames;
};

/// JSON Lines, one frame per line: {"t": seconds, "joints": [[x, y, z] x 21]}.
/// The trajectory id defaults to the file stem.
InputTrajectory load_input_trajectory(const std::string& path);
void save_input_trajectory(const InputTrajectory& traj, const std::string& path);
InputTrajectory parse_input_trajectory(std::istream& in, const std::string& id, const std::string& where);

/// Recorded retargeting output. Header line carries the trajectory id, dt,
/// object geometry and free-form run metadata; each following line holds one
/// frame. Doubles round-trip exactly.
void save_records(const RecordedTrajectory& rec, const std::string& path,
                  const nlohmann::json& metadata = nlohmann::json::object());

struct LoadedRecords {
  RecordedTrajectory trajectory;
  nlohmann::json metadata;
};

LoadedRecords load_records(const std::string& path);

nlohmann::json skeleton_to_json(const Skeleton& s);
Skeleton skeleton_from_json(const nlohmann::json& j);

}  // namespace handretarget
