#include "handretarget/evaluator.hpp"

#include <algorithm>

namespace handretarget {

std::optional<std::size_t> sequence_of_interest(std::span<const FrameRecord> frames) {
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].contacts.touching(frames[i].scene.params.contact_epsilon) >= 2) return i;
  }
  return std::nullopt;
}

bool is_lifting_frame(const FrameRecord& frame, double table_height, const LiftingThresholds& t) {
  const bool above_table = frame.scene.object_bottom() > table_height + t.above_table_margin;
  const bool near_palm = (frame.scene.center() - frame.palm_center).norm() < t.palm_distance;
  const bool close = frame.contacts.present() >= 1;
  return above_table && near_palm && close;
}

double lifting_ratio(std::span<const FrameRecord> frames, const LiftingThresholds& t) {
  const auto soi = sequence_of_interest(frames);
  if (!soi) return 0.0;
  std::size_t lifting = 0;
  for (std::size_t i = *soi; i < frames.size(); ++i) {
    if (is_lifting_frame(frames[i], frames[i].scene.table_height, t)) ++lifting;
  }
  return static_cast<double>(lifting) / static_cast<double>(frames.size() - *soi);
}

namespace {

double max_lift(std::span<const FrameRecord> frames) {
  double best = 0.0;
  for (const FrameRecord& f : frames) best = std::max(best, f.scene.center().z() - f.scene.initial_height);
  return best;
}

}  // namespace

bool is_success(std::span<const FrameRecord> frames, const LiftingThresholds& t) {
  if (frames.empty()) return false;
  const FrameRecord& last = frames.back();
  if (is_lifting_frame(last, last.scene.table_height, t)) return true;
  return max_lift(frames) > t.lift_height;
}

TrajectoryMetrics evaluate_trajectory(std::span<const FrameRecord> frames, const LiftingThresholds& t) {
  TrajectoryMetrics m;
  m.soi_start = sequence_of_interest(frames);
  m.lifting_ratio = lifting_ratio(frames, t);
  m.success = is_success(frames, t);
  m.max_lift_height = max_lift(frames);
  return m;
}

nlohmann::json to_json(const TrajectoryMetrics& m) {
  nlohmann::json j;
  j["soi_start"] = m.soi_start ? nlohmann::json(*m.soi_start) : nlohmann::json(nullptr);
  j["lifting_ratio"] = m.lifting_ratio;
  j["success"] = m.success;
  j["max_lift_height"] = m.max_lift_height;
  return j;
}

}  // namespace handretarget
