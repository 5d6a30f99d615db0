#pragma once

#include <string>
#include <vector>

#include "handretarget/hand_model.hpp"
#include "handretarget/evaluator.hpp"
#include "handretarget/scene.hpp"

namespace handretarget::testing {

std::string data_path(const std::string& relative);

/// Shipped default hand, loaded once.
const HandModel& default_model();

SceneState cube_scene();

/// Ten noise-free synthetic grasps retargeted with IK, computed once.
const std::vector<RecordedTrajectory>& clean_ik_records();

}  // namespace handretarget::testing
