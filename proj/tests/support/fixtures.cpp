#include "fixtures.hpp"

#include "handretarget/pipeline.hpp"
#include "handretarget/synth.hpp"

namespace handretarget::testing {

std::string data_path(const std::string& relative) { return std::string(HANDRETARGET_DATA_DIR) + "/" + relative; }

const HandModel& default_model() {
  static const HandModel model = HandModel::load(data_path("hand_model.json"));
  return model;
}

SceneState cube_scene() { return load_scene(data_path("scene_cube.json")); }

const std::vector<RecordedTrajectory>& clean_ik_records() {
  static const std::vector<RecordedTrajectory> records = [] {
    SynthOptions opt;
    opt.seed = 1;
    RetargetSettings settings;
    settings.mode = RetargetMode::Ik;
    return run_batch(synth_generate(cube_scene(), default_model(), opt), default_model(), cube_scene(), settings, 1);
  }();
  return records;
}

}  // namespace handretarget::testing
