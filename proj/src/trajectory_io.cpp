#include "handretarget/trajectory_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace handretarget {

using nlohmann::json;

json skeleton_to_json(const Skeleton& s) {
  json out = json::array();
  for (const Vec3& p : s.joints) out.push_back({p.x(), p.y(), p.z()});
  return out;
}

Skeleton skeleton_from_json(const json& j) {
  if (!j.is_array() || j.size() != kSkeletonPoints) {
    throw ValidationError("skeleton must have 21 points, got " + std::to_string(j.is_array() ? j.size() : 0));
  }
  Skeleton s;
  for (std::size_t i = 0; i < kSkeletonPoints; ++i) {
    const json& p = j[i];
    if (!p.is_array() || p.size() != 3) throw ValidationError("skeleton point must have 3 coordinates");
    s[i] = Vec3(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
  }
  return s;
}

InputTrajectory parse_input_trajectory(std::istream& in, const std::string& id, const std::string& where) {
  InputTrajectory traj;
  traj.id = id;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string loc = where + ":" + std::to_string(lineno);
    InputFrame f;
    try {
      const json j = json::parse(line);
      f.timestamp = j.at("t").get<double>();
      f.joints = skeleton_from_json(j.at("joints"));
    } catch (const json::exception& e) {
      throw ValidationError(loc + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(loc + ": " + e.what());
    }
    if (!std::isfinite(f.timestamp) || !f.joints.all_finite()) throw ValidationError(loc + ": non-finite value");
    if (!traj.frames.empty() && !(f.timestamp > traj.frames.back().timestamp)) {
      throw ValidationError(loc + ": timestamps must be strictly increasing");
    }
    traj.frames.push_back(std::move(f));
  }
  if (traj.frames.empty()) throw ValidationError(where + ": no frames");
  return traj;
}

InputTrajectory load_input_trajectory(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return parse_input_trajectory(in, std::filesystem::path(path).stem().string(), path);
}

void save_input_trajectory(const InputTrajectory& traj, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  for (const InputFrame& f : traj.frames) {
    out << json{{"t", f.timestamp}, {"joints", skeleton_to_json(f.joints)}}.dump() << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

namespace {

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from(const json& j) { return Vec3(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()); }

json frame_to_json(const FrameRecord& f) {
  json entries = json::array();
  for (const ContactEntry& e : f.contacts.entries) entries.push_back({e.distance, e.raw, e.missing});
  const Mat3 r = f.scene.pose.linear();
  json rot = json::array();
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) rot.push_back(r(i, k));
  json obj = {{"position", vec(f.scene.pose.translation())},
              {"rotation", rot},
              {"velocity", vec(f.scene.velocity)},
              {"held", f.scene.held}};
  if (f.scene.last_palm) {
    const Eigen::Isometry3d& lp = *f.scene.last_palm;
    json m = json::array();
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 4; ++k) m.push_back(lp.matrix()(i, k));
    obj["last_palm"] = m;
  }
  return {{"t", f.timestamp},
          {"x", skeleton_to_json(f.source)},
          {"actuators", std::vector<double>(f.actuators.data(), f.actuators.data() + kActionDim)},
          {"y", skeleton_to_json(f.simulated)},
          {"palm_center", vec(f.palm_center)},
          {"contacts", {{"d_max", f.contacts.d_max}, {"omega_cost", f.contacts.omega_cost}, {"entries", entries}}},
          {"object", obj}};
}

FrameRecord frame_from_json(const json& j, const SceneState& base) {
  FrameRecord f;
  f.timestamp = j.at("t").get<double>();
  f.source = skeleton_from_json(j.at("x"));
  const auto a = j.at("actuators").get<std::vector<double>>();
  if (a.size() != kActionDim) throw ValidationError("actuators must have 29 values");
  for (std::size_t k = 0; k < kActionDim; ++k) f.actuators[k] = a[k];
  f.simulated = skeleton_from_json(j.at("y"));
  f.palm_center = vec_from(j.at("palm_center"));
  const json& c = j.at("contacts");
  f.contacts.d_max = c.at("d_max").get<double>();
  f.contacts.omega_cost = c.at("omega_cost").get<double>();
  const json& entries = c.at("entries");
  if (entries.size() != kContactPoints) throw ValidationError("contacts must have 6 entries");
  for (std::size_t i = 0; i < kContactPoints; ++i) {
    f.contacts.entries[i] = {entries[i].at(0).get<double>(), entries[i].at(1).get<double>(),
                             entries[i].at(2).get<bool>()};
  }
  const json& o = j.at("object");
  f.scene = base;
  f.scene.pose = Eigen::Isometry3d::Identity();
  f.scene.pose.translation() = vec_from(o.at("position"));
  const json& rot = o.at("rotation");
  if (rot.size() != 9) throw ValidationError("object rotation must have 9 values");
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) r(i, k) = rot[3 * i + k].get<double>();
  f.scene.pose.linear() = r;
  f.scene.velocity = vec_from(o.at("velocity"));
  f.scene.held = o.at("held").get<bool>();
  f.scene.last_palm.reset();
  if (o.contains("last_palm")) {
    const json& m = o["last_palm"];
    if (m.size() != 12) throw ValidationError("last_palm must have 12 values");
    Eigen::Isometry3d lp = Eigen::Isometry3d::Identity();
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 4; ++k) lp.matrix()(i, k) = m[4 * i + k].get<double>();
    f.scene.last_palm = lp;
  }
  return f;
}

}  // namespace

void save_records(const RecordedTrajectory& rec, const std::string& path, const json& metadata) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  json header;
  header["format"] = "handretarget.records";
  header["version"] = 1;
  header["trajectory"] = rec.id;
  header["dt"] = rec.dt;
  header["frames"] = rec.frames.size();
  header["metadata"] = metadata;
  if (!rec.frames.empty()) {
    header["scene"] = scene_geometry_to_json(rec.frames.front().scene);
    header["initial_height"] = rec.frames.front().scene.initial_height;
  }
  out << header.dump() << '\n';
  for (const FrameRecord& f : rec.frames) out << frame_to_json(f).dump() << '\n';
  if (!out) throw IoError("write failed: " + path);
}

LoadedRecords load_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  LoadedRecords out;
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path + ": empty records file");
  std::size_t lineno = 1;
  try {
    const json header = json::parse(line);
    if (header.value("format", std::string()) != "handretarget.records") {
      throw ValidationError(path + ": not a records file");
    }
    out.trajectory.id = header.at("trajectory").get<std::string>();
    out.trajectory.dt = header.at("dt").get<double>();
    out.metadata = header.value("metadata", json::object());
    SceneState base;
    if (header.contains("scene")) {
      base = parse_scene(header["scene"]);
      base.initial_height = header.at("initial_height").get<double>();
    }
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      out.trajectory.frames.push_back(frame_from_json(json::parse(line), base));
    }
    if (out.trajectory.frames.size() != header.at("frames").get<std::size_t>()) {
      throw ValidationError(path + ": frame count does not match the header");
    }
  } catch (const json::exception& e) {
    throw ValidationError(path + ":" + std::to_string(lineno) + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return out;
}

}  // namespace handretarget
