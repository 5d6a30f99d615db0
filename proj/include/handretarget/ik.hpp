#pragma once

#include <optional>

#include <json.hpp>

#include "handretarget/hand_model.hpp"

namespace handretarget {

struct IkConfig {
  int max_passes = 3;
  bool clamp_to_limits = true;
  bool warm_start = true;

  void validate() const;
};

IkConfig parse_ik_config(const nlohmann::json& doc);
nlohmann::json to_json(const IkConfig& c);

/// Closed-form retargeting baseline.
///
/// The global pose is the least-squares rigid alignment of the model's rest
/// palm (wrist + five MCPs) onto the target palm. Wrist actuators stay at 0
/// since they are redundant with the global rotation about the wrist point.
/// Finger actuators are then solved link by link, top-down: each actuator
/// angle is the signed angle, about its axis, between the projected model bone
/// and the projected target bone. Links with several actuators are swept
/// Gauss-Seidel style for up to `max_passes` passes (one pass is exact for
/// mutually orthogonal axes).
///
/// Throws DegenerateInput for a collinear palm.
ActuatorVector ik_retarget(const Skeleton& x_scaled, const HandModel& model, const std::optional<ActuatorVector>& prev,
                           const IkConfig& cfg = {});

}  // namespace handretarget
