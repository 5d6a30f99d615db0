#include "handretarget/demo.hpp"

#include <algorithm>
#include <fstream>

namespace handretarget {

using nlohmann::json;

StateVector extract_state(const FrameRecord& frame, const FrameRecord* prev, double dt) {
  if (!(dt > 0.0)) throw ConfigError("extract_state: dt must be > 0");
  StateVector s;
  auto& v = s.values;
  const Vec3 rel = frame.palm_center - frame.scene.center();
  for (int k = 0; k < 3; ++k) v[StateVector::kRelPos + k] = rel[k];
  if (prev) {
    const Vec3 prev_rel = prev->palm_center - prev->scene.center();
    for (int k = 0; k < 3; ++k) v[StateVector::kRelVel + k] = (rel[k] - prev_rel[k]) / dt;
  }
  for (std::size_t j = 0; j < kJointActuators; ++j) {
    const double q = frame.actuators[kGlobalDofs + j];
    v[StateVector::kJointAngles + j] = q;
    if (prev) v[StateVector::kJointVels + j] = (q - prev->actuators[kGlobalDofs + j]) / dt;
  }
  const double cap = frame.contacts.omega_cost * frame.contacts.d_max;
  for (std::size_t f = 0; f < kFingers; ++f) {
    v[StateVector::kContact + f] = std::min(frame.contacts.entries[f + 1].raw, cap);
  }
  return s;
}

DemoTrajectory build_demo(const RecordedTrajectory& trajectory) {
  DemoTrajectory demo;
  demo.id = trajectory.id;
  demo.frames.reserve(trajectory.frames.size());
  for (std::size_t i = 0; i < trajectory.frames.size(); ++i) {
    const FrameRecord& fr = trajectory.frames[i];
    DemoFrame df;
    df.state = extract_state(fr, i > 0 ? &trajectory.frames[i - 1] : nullptr, trajectory.dt);
    df.action = fr.actuators;
    df.timestamp = fr.timestamp;
    demo.frames.push_back(df);
  }
  return demo;
}

void export_demos(std::span<const RecordedTrajectory> trajectories, const std::string& path,
                  const json& header_info) {
  std::vector<DemoTrajectory> demos;
  for (const RecordedTrajectory& t : trajectories) {
    if (!is_success(t.frames)) throw ValidationError("export_demos: trajectory '" + t.id + "' is not a success");
    demos.push_back(build_demo(t));
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  json header = header_info;
  header["format"] = "handretarget.demos";
  header["version"] = 1;
  header["state_dim"] = kStateDim;
  header["action_dim"] = kActionDim;
  header["trajectories"] = demos.size();
  out << header.dump() << '\n';
  for (const DemoTrajectory& d : demos) {
    for (const DemoFrame& f : d.frames) {
      json line;
      line["traj_id"] = d.id;
      line["t"] = f.timestamp;
      line["state"] = f.state.values;
      line["action"] = std::vector<double>(f.action.data(), f.action.data() + kActionDim);
      out << line.dump() << '\n';
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

DemoDataset import_demos(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  DemoDataset ds;
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path + ": missing header line");
  try {
    ds.header = json::parse(line);
    if (ds.header.value("format", std::string()) != "handretarget.demos") {
      throw ValidationError(path + ": not a demonstration file");
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const json j = json::parse(line);
      const auto state = j.at("state").get<std::vector<double>>();
      const auto action = j.at("action").get<std::vector<double>>();
      if (state.size() != kStateDim || action.size() != kActionDim) {
        throw ValidationError(path + ":" + std::to_string(lineno) + ": state must have 57 and action 29 values");
      }
      const std::string id = j.at("traj_id").get<std::string>();
      if (ds.trajectories.empty() || ds.trajectories.back().id != id) ds.trajectories.push_back({id, {}});
      DemoFrame f;
      std::copy(state.begin(), state.end(), f.state.values.begin());
      for (std::size_t k = 0; k < kActionDim; ++k) f.action[k] = action[k];
      f.timestamp = j.at("t").get<double>();
      ds.trajectories.back().frames.push_back(f);
    }
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return ds;
}

}  // namespace handretarget
