#include "handretarget/hand_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace handretarget {

using nlohmann::json;

Mat3 euler_xyz_to_matrix(const Vec3& rpy) {
  return (Eigen::AngleAxisd(rpy.z(), Vec3::UnitZ()) * Eigen::AngleAxisd(rpy.y(), Vec3::UnitY()) *
          Eigen::AngleAxisd(rpy.x(), Vec3::UnitX()))
      .toRotationMatrix();
}

Vec3 matrix_to_euler_xyz(const Mat3& r, double x_hint) {
  const double sy = std::clamp(-r(2, 0), -1.0, 1.0);
  const double y = std::asin(sy);
  if (std::abs(sy) > 1.0 - 1e-12) {
    // Gimbal lock: only x - z (or x + z) is observable.
    const double x = x_hint;
    const Mat3 rx = Eigen::AngleAxisd(x, Vec3::UnitX()).toRotationMatrix();
    const Mat3 ry = Eigen::AngleAxisd(y, Vec3::UnitY()).toRotationMatrix();
    const Mat3 rz = r * (ry * rx).transpose();
    return {x, y, std::atan2(rz(1, 0), rz(0, 0))};
  }
  return {std::atan2(r(2, 1), r(2, 2)), y, std::atan2(r(1, 0), r(0, 0))};
}

Mat3 axis_angle(const Vec3& k, double angle) {
  const double s = std::sin(angle);
  const double c1 = 1.0 - std::cos(angle);
  Mat3 kx;
  kx << 0.0, -k.z(), k.y(), k.z(), 0.0, -k.x(), -k.y(), k.x(), 0.0;
  return Mat3::Identity() + s * kx + c1 * (kx * kx);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Skeleton geometry

Skeleton Skeleton::scaled(double k) const {
  Skeleton out;
  for (std::size_t i = 0; i < kSkeletonPoints; ++i) out.joints[i] = k * joints[i];
  return out;
}

Skeleton Skeleton::transformed(const Eigen::Isometry3d& t) const {
  Skeleton out;
  for (std::size_t i = 0; i < kSkeletonPoints; ++i) out.joints[i] = t * joints[i];
  return out;
}

bool Skeleton::all_finite() const {
  return std::all_of(joints.begin(), joints.end(), [](const Vec3& p) { return p.allFinite(); });
}

namespace {

// Parent point of bone b (0..19): the bone ends at skeleton point b + 1.
constexpr std::size_t bone_parent(std::size_t b) { return b % 4 == 0 ? kWrist : b; }

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace

BoneVectors bone_vectors(const Skeleton& s) {
  BoneVectors out;
  for (std::size_t b = 0; b < kBones; ++b) out.vectors[b] = s[b + 1] - s[bone_parent(b)];
  return out;
}

JointAngles joint_angles(const Skeleton& s) {
  const BoneVectors bones = bone_vectors(s);
  for (const Vec3& v : bones.vectors) {
    if (!(v.norm() > 0.0)) throw DegenerateInput("joint_angles: zero-length bone");
  }
  JointAngles out;
  for (std::size_t f = 0; f < kFingers; ++f) {
    for (std::size_t j = 0; j < 3; ++j) {
      out.angles[3 * f + j] = angle_between(bones.vectors[4 * f + j], bones.vectors[4 * f + j + 1]);
    }
  }
  return out;
}

double scale_factor(const Skeleton& x, const Skeleton& y) {
  const BoneVectors bx = bone_vectors(x);
  const BoneVectors by = bone_vectors(y);
  double sum = 0.0;
  for (std::size_t b = 0; b < kBones; ++b) {
    const double nx = bx.vectors[b].norm();
    if (!(nx > 0.0)) throw DegenerateInput("scale_factor: zero-length bone in source skeleton");
    sum += by.vectors[b].norm() / nx;
  }
  return sum / static_cast<double>(kBones);
}

double hand_span(const Skeleton& s) {
  double span = 0.0;
  for (std::size_t f = 0; f < kFingers; ++f) {
    span = std::max(span, (s[fingertip_index(f)] - s[kWrist]).norm());
  }
  return span;
}

// ---------------------------------------------------------------------------
// Spec file

namespace {

Vec3 vec3_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(std::string("expected 3-vector for ") + what);
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json vec3_to(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace

HandModelSpec parse_hand_model_spec(const json& doc) {
  HandModelSpec spec;
  try {
    spec.name = doc.value("name", std::string("hand"));
    for (const json& a : doc.at("actuators")) {
      ActuatorSpec act;
      act.name = a.at("name").get<std::string>();
      act.axis = vec3_from(a.at("axis"), "actuator axis");
      const json& lim = a.at("limits");
      if (!lim.is_array() || lim.size() != 2) throw ConfigError("actuator limits must be [lo, hi]");
      act.lo = lim[0].get<double>();
      act.hi = lim[1].get<double>();
      spec.actuators.push_back(std::move(act));
    }
    for (const json& l : doc.at("links")) {
      LinkSpec link;
      link.name = l.at("name").get<std::string>();
      link.parent = l.at("parent").get<std::string>();
      if (l.contains("origin")) link.origin = vec3_from(l["origin"], "link origin");
      if (l.contains("rpy")) link.rpy = vec3_from(l["rpy"], "link rpy");
      if (l.contains("actuators")) link.actuators = l["actuators"].get<std::vector<std::string>>();
      if (l.contains("length")) link.length = l["length"].get<double>();
      spec.links.push_back(std::move(link));
    }
    const json& sk = doc.at("skeleton");
    if (!sk.is_array() || sk.size() != kSkeletonPoints) {
      throw ConfigError("skeleton mapping must list exactly 21 points");
    }
    for (std::size_t i = 0; i < kSkeletonPoints; ++i) {
      spec.skeleton[i].link = sk[i].at("link").get<std::string>();
      if (sk[i].contains("point")) spec.skeleton[i].point = vec3_from(sk[i]["point"], "skeleton point");
    }
    if (doc.contains("palm_center")) spec.palm_center = vec3_from(doc["palm_center"], "palm_center");
    if (doc.contains("global_ranges")) {
      const auto r = doc["global_ranges"].get<std::vector<double>>();
      if (r.size() != kGlobalDofs) throw ConfigError("global_ranges must have 6 entries");
      std::copy(r.begin(), r.end(), spec.global_ranges.begin());
    }
    if (doc.contains("rest_skeleton")) {
      const json& rs = doc["rest_skeleton"];
      if (!rs.is_array() || rs.size() != kSkeletonPoints) throw ConfigError("rest_skeleton must have 21 points");
      Skeleton s;
      for (std::size_t i = 0; i < kSkeletonPoints; ++i) s[i] = vec3_from(rs[i], "rest_skeleton point");
      spec.rest_skeleton = s;
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("hand model spec: ") + e.what());
  }
  return spec;
}

json to_json(const HandModelSpec& spec) {
  json doc;
  doc["name"] = spec.name;
  doc["global_ranges"] = spec.global_ranges;
  doc["palm_center"] = vec3_to(spec.palm_center);
  for (const auto& a : spec.actuators) {
    doc["actuators"].push_back({{"name", a.name}, {"axis", vec3_to(a.axis)}, {"limits", {a.lo, a.hi}}});
  }
  for (const auto& l : spec.links) {
    json j = {{"name", l.name}, {"parent", l.parent}, {"origin", vec3_to(l.origin)}, {"rpy", vec3_to(l.rpy)},
              {"actuators", l.actuators}};
    if (l.length) j["length"] = *l.length;
    doc["links"].push_back(std::move(j));
  }
  for (const auto& s : spec.skeleton) doc["skeleton"].push_back({{"link", s.link}, {"point", vec3_to(s.point)}});
  if (spec.rest_skeleton) {
    for (const Vec3& p : spec.rest_skeleton->joints) doc["rest_skeleton"].push_back(vec3_to(p));
  }
  return doc;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

HandModelSpec load_hand_model_spec(const std::string& path) {
  const std::string text = read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_hand_model_spec(doc);
}

// ---------------------------------------------------------------------------
// HandModel

HandModel::HandModel(HandModelSpec spec) : spec_(std::move(spec)) {
  if (spec_.actuators.size() != kJointActuators) {
    throw ConfigError("hand model must define exactly 23 actuators, got " + std::to_string(spec_.actuators.size()));
  }
  std::map<std::string, int> actuator_index;
  for (std::size_t i = 0; i < spec_.actuators.size(); ++i) {
    auto& a = spec_.actuators[i];
    if (!actuator_index.emplace(a.name, static_cast<int>(i)).second) throw ConfigError("duplicate actuator " + a.name);
    if (std::abs(a.axis.norm() - 1.0) > 1e-9) throw ConfigError("actuator axis not unit-norm: " + a.name);
    if (!(a.lo <= 0.0 && 0.0 <= a.hi)) throw ConfigError("actuator limits must bracket 0: " + a.name);
  }
  for (double r : spec_.global_ranges) {
    if (!(r > 0.0)) throw ConfigError("global_ranges must be positive");
  }

  // Topological order; reject unknown parents and cycles.
  std::map<std::string, std::size_t> by_name;
  for (std::size_t i = 0; i < spec_.links.size(); ++i) {
    if (!by_name.emplace(spec_.links[i].name, i).second) throw ConfigError("duplicate link " + spec_.links[i].name);
    if (spec_.links[i].length && !(*spec_.links[i].length > 0.0)) {
      throw ConfigError("link length must be positive: " + spec_.links[i].name);
    }
  }
  std::vector<std::size_t> order;
  std::vector<int> state(spec_.links.size(), 0);  // 0 new, 1 visiting, 2 done
  std::function<void(std::size_t)> visit = [&](std::size_t i) {
    if (state[i] == 2) return;
    if (state[i] == 1) throw ConfigError("kinematic tree has a cycle at link " + spec_.links[i].name);
    state[i] = 1;
    const std::string& parent = spec_.links[i].parent;
    if (parent != "world") {
      auto it = by_name.find(parent);
      if (it == by_name.end()) throw ConfigError("link " + spec_.links[i].name + " has missing parent " + parent);
      visit(it->second);
    }
    state[i] = 2;
    order.push_back(i);
  };
  for (std::size_t i = 0; i < spec_.links.size(); ++i) visit(i);

  std::map<std::string, int> link_index;
  std::vector<int> used(kJointActuators, 0);
  int roots = 0;
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const LinkSpec& ls = spec_.links[order[oi]];
    Link link;
    link.parent = ls.parent == "world" ? -1 : link_index.at(ls.parent);
    if (link.parent < 0) {
      ++roots;
      palm_link_ = static_cast<int>(oi);
    }
    link.origin = ls.origin;
    link.rest_rotation = euler_xyz_to_matrix(ls.rpy);
    for (const std::string& an : ls.actuators) {
      auto it = actuator_index.find(an);
      if (it == actuator_index.end()) throw ConfigError("link " + ls.name + " references unknown actuator " + an);
      ++used[it->second];
      link.actuators.push_back(it->second);
      link.axes.push_back(spec_.actuators[it->second].axis);
    }
    link_index[ls.name] = static_cast<int>(oi);
    links_.push_back(std::move(link));
  }
  if (roots != 1) throw ConfigError("kinematic tree must have exactly one root link");
  for (std::size_t i = 0; i < kJointActuators; ++i) {
    if (used[i] != 1) throw ConfigError("actuator " + spec_.actuators[i].name + " must be attached to exactly one link");
  }

  for (std::size_t p = 0; p < kSkeletonPoints; ++p) {
    auto it = link_index.find(spec_.skeleton[p].link);
    if (it == link_index.end()) throw ConfigError("skeleton point references missing link " + spec_.skeleton[p].link);
    anchor_link_[p] = it->second;
  }

  // Structural contract relied on by the IK solver and the bone-length table.
  const auto link_name = [&](int li) { return spec_.links[order[li]].name; };
  if (anchor_link_[kWrist] != palm_link_ || !spec_.skeleton[kWrist].point.isZero(0.0) ||
      !links_[palm_link_].origin.allFinite()) {
    throw ConfigError("wrist must be the origin of the root link");
  }
  for (std::size_t f = 0; f < kFingers; ++f) {
    for (std::size_t j = 0; j < 3; ++j) {
      const std::size_t p = point_index(f, j);
      const int li = anchor_link_[p];
      if (!spec_.skeleton[p].point.isZero(0.0)) {
        throw ConfigError("finger joint points must sit at link origins (point " + std::to_string(p) + ")");
      }
      const int expected_parent = j == 0 ? palm_link_ : finger_links_[f][j - 1];
      if (links_[li].parent != expected_parent) {
        throw ConfigError("link " + link_name(li) + " is not chained to the preceding finger link");
      }
      finger_links_[f][j] = li;
    }
    if (anchor_link_[fingertip_index(f)] != finger_links_[f][2]) {
      throw ConfigError("fingertip must be anchored on the distal finger link");
    }
    const Vec3 palm_offset = links_[finger_links_[f][0]].origin;
    bone_lengths_[4 * f + 0] = palm_offset.norm();
    bone_lengths_[4 * f + 1] = links_[finger_links_[f][1]].origin.norm();
    bone_lengths_[4 * f + 2] = links_[finger_links_[f][2]].origin.norm();
    bone_lengths_[4 * f + 3] = spec_.skeleton[fingertip_index(f)].point.norm();
  }
  for (double len : bone_lengths_) {
    if (!(len > 0.0)) throw ConfigError("hand model has a zero-length bone");
  }

  rest_ = forward(ActuatorVector::Zero()).skeleton;
  if (spec_.rest_skeleton) {
    for (std::size_t i = 0; i < kSkeletonPoints; ++i) {
      if ((spec_.rest_skeleton->joints[i] - rest_[i]).norm() > 1e-9) {
        throw ConfigError("rest_skeleton does not match the link geometry at point " + std::to_string(i));
      }
    }
  }
  fingerprint_ = fnv1a64(to_json(spec_).dump());
}

HandModel HandModel::load(const std::string& path) { return HandModel(load_hand_model_spec(path)); }

ActuatorVector HandModel::action_ranges() const {
  ActuatorVector r;
  for (std::size_t i = 0; i < kGlobalDofs; ++i) r[i] = spec_.global_ranges[i];
  for (std::size_t i = 0; i < kJointActuators; ++i) r[kGlobalDofs + i] = spec_.actuators[i].range();
  return r;
}

ActuatorVector HandModel::clamp(const ActuatorVector& a) const {
  ActuatorVector out = a;
  for (std::size_t i = 0; i < kJointActuators; ++i) {
    out[kGlobalDofs + i] = std::clamp(a[kGlobalDofs + i], spec_.actuators[i].lo, spec_.actuators[i].hi);
  }
  return out;
}

HandPose HandModel::forward(const ActuatorVector& a) const { return forward_unclamped(clamp(a)); }

HandPose HandModel::forward_unclamped(const ActuatorVector& a) const {
  const Mat3 root_rotation = euler_xyz_to_matrix(a.segment<3>(3));
  const Vec3 root_position = a.head<3>();

  thread_local std::vector<Mat3> rot;
  thread_local std::vector<Vec3> pos;
  rot.resize(links_.size());
  pos.resize(links_.size());
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const Link& l = links_[i];
    const Mat3& pr = l.parent < 0 ? root_rotation : rot[l.parent];
    const Vec3& pp = l.parent < 0 ? root_position : pos[l.parent];
    pos[i] = pp + pr * l.origin;
    Mat3 r = pr * l.rest_rotation;
    for (std::size_t k = 0; k < l.actuators.size(); ++k) {
      r = r * axis_angle(l.axes[k], a[kGlobalDofs + l.actuators[k]]);
    }
    rot[i] = r;
  }

  HandPose out;
  for (std::size_t p = 0; p < kSkeletonPoints; ++p) {
    const int li = anchor_link_[p];
    out.skeleton[p] = pos[li] + rot[li] * spec_.skeleton[p].point;
  }
  out.palm_frame.linear() = rot[palm_link_];
  out.palm_frame.translation() = pos[palm_link_];
  out.palm_center = out.palm_frame * spec_.palm_center;
  return out;
}

}  // namespace handretarget
