#include "handretarget/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace handretarget {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kPi = 3.14159265358979323846;

}  // namespace

double point_shape_distance(const Vec3& p_object, const ObjectShape& shape) {
  const Vec3 p = shape.local.inverse() * p_object;
  return std::visit(overloaded{
                        [&](const Sphere& s) { return std::max(0.0, p.norm() - s.radius); },
                        [&](const Box& b) {
                          const Vec3 q = p.cwiseAbs() - b.half_extents;
                          return q.cwiseMax(0.0).norm();
                        },
                        [&](const Cylinder& c) {
                          const double radial = std::max(0.0, std::hypot(p.x(), p.y()) - c.radius);
                          const double axial = std::max(0.0, std::abs(p.z()) - c.half_height);
                          return std::hypot(radial, axial);
                        },
                    },
                    shape.geometry);
}

double point_object_distance(const Vec3& p_world, const ObjectShape& shape, const Eigen::Isometry3d& object_pose) {
  return point_shape_distance(object_pose.inverse() * p_world, shape);
}

double lowest_point_z(const ObjectShape& shape, const Eigen::Isometry3d& object_pose) {
  const Eigen::Isometry3d world = object_pose * shape.local;
  const Vec3 c = world.translation();
  const Mat3 r = world.linear();
  return std::visit(overloaded{
                        [&](const Sphere& s) { return c.z() - s.radius; },
                        [&](const Box& b) {
                          return c.z() - (std::abs(r(2, 0)) * b.half_extents.x() +
                                          std::abs(r(2, 1)) * b.half_extents.y() +
                                          std::abs(r(2, 2)) * b.half_extents.z());
                        },
                        [&](const Cylinder& cy) {
                          const double az = std::clamp(std::abs(r(2, 2)), 0.0, 1.0);
                          return c.z() - (az * cy.half_height + cy.radius * std::sqrt(1.0 - az * az));
                        },
                    },
                    shape.geometry);
}

double SceneState::object_bottom() const {
  double z = std::numeric_limits<double>::infinity();
  for (const ObjectShape& s : object) z = std::min(z, lowest_point_z(s, pose));
  return z;
}

std::size_t ContactSet::touching(double epsilon) const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [&](const ContactEntry& e) { return e.raw <= epsilon; }));
}

std::size_t ContactSet::present() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const ContactEntry& e) { return !e.missing; }));
}

double object_distance(const Vec3& p_world, const SceneState& scene) {
  const Vec3 p = scene.pose.inverse() * p_world;
  double d = std::numeric_limits<double>::infinity();
  for (const ObjectShape& s : scene.object) d = std::min(d, point_shape_distance(p, s));
  return d;
}

ContactSet contact_distances(const HandContactPoints& hand, const SceneState& scene, double d_max,
                             double omega_cost) {
  ContactSet out;
  out.d_max = d_max;
  out.omega_cost = omega_cost;
  for (std::size_t i = 0; i < kContactPoints; ++i) {
    ContactEntry& e = out.entries[i];
    e.raw = object_distance(hand.point(i), scene);
    e.missing = !(e.raw < d_max);
    e.distance = e.missing ? omega_cost * d_max : e.raw;
  }
  return out;
}

bool grasp_rule(const HandContactPoints& hand, const SceneState& scene) {
  std::array<Vec3, kContactPoints> dirs;
  std::size_t n = 0;
  const Vec3 c = scene.center();
  for (std::size_t i = 0; i < kContactPoints; ++i) {
    if (object_distance(hand.point(i), scene) <= scene.params.contact_epsilon) dirs[n++] = hand.point(i) - c;
  }
  if (n < 2) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double angle = std::atan2(dirs[i].cross(dirs[j]).norm(), dirs[i].dot(dirs[j]));
      if (angle > scene.params.opposition_angle) return true;
    }
  }
  return false;
}

namespace {

// Lifts the object out of the table if needed; returns true when it was moved.
bool resolve_table(SceneState& s) {
  const double gap = s.object_bottom() - s.table_height;
  if (gap < 0.0) {
    s.pose.translation().z() -= gap;
    return true;
  }
  return false;
}

void ballistic(SceneState& s, double dt) {
  const double g = s.params.gravity;
  const bool resting = s.object_bottom() <= s.table_height + 1e-12 && s.velocity.z() <= 0.0;
  if (resting) {
    s.velocity.setZero();
    return;
  }
  Vec3 p = s.pose.translation();
  p += s.velocity * dt;
  p.z() -= 0.5 * g * dt * dt;
  s.pose.translation() = p;
  s.velocity.z() -= g * dt;
  if (resolve_table(s)) s.velocity.setZero();
}

}  // namespace

SceneState step_scene(const SceneState& scene, const HandContactPoints& hand, double dt) {
  SceneState out = scene;
  out.last_palm = hand.palm_frame;

  if (scene.held && scene.last_palm) {
    SceneState carried = scene;
    carried.pose = hand.palm_frame * scene.last_palm->inverse() * scene.pose;
    resolve_table(carried);
    if (grasp_rule(hand, carried)) {
      out.pose = carried.pose;
      out.velocity = (carried.pose.translation() - scene.pose.translation()) / dt;
      out.held = true;
      return out;
    }
  } else if (grasp_rule(hand, scene)) {
    out.held = true;
    out.velocity.setZero();
    return out;
  }

  // A released object drops from rest; it does not inherit the hand's motion.
  if (scene.held) out.velocity.setZero();
  out.held = false;
  ballistic(out, dt);
  return out;
}

// ---------------------------------------------------------------------------
// Scene files

namespace {

Vec3 vec3_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(std::string("scene: expected 3-vector for ") + what);
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json vec3_to(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Eigen::Isometry3d pose_from(const json& j) {
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  if (j.contains("position")) t.translation() = vec3_from(j["position"], "position");
  if (j.contains("rpy")) t.linear() = euler_xyz_to_matrix(vec3_from(j["rpy"], "rpy"));
  return t;
}

}  // namespace

SceneState parse_scene(const json& doc) {
  SceneState s;
  try {
    s.table_height = doc.value("table_height", 0.0);
    s.params.contact_epsilon = doc.value("contact_epsilon", s.params.contact_epsilon);
    if (doc.contains("opposition_angle_deg")) {
      s.params.opposition_angle = doc["opposition_angle_deg"].get<double>() * kPi / 180.0;
    }
    s.params.gravity = doc.value("gravity", s.params.gravity);
    const json& obj = doc.at("object");
    s.pose = pose_from(obj);
    for (const json& p : obj.at("primitives")) {
      ObjectShape shape;
      shape.local = pose_from(p);
      const std::string type = p.at("type").get<std::string>();
      if (type == "sphere") {
        shape.geometry = Sphere{p.at("radius").get<double>()};
        if (!(std::get<Sphere>(shape.geometry).radius > 0.0)) throw ConfigError("scene: sphere radius must be > 0");
      } else if (type == "box") {
        Box b{vec3_from(p.at("half_extents"), "half_extents")};
        if (!(b.half_extents.minCoeff() > 0.0)) throw ConfigError("scene: box half extents must be > 0");
        shape.geometry = b;
      } else if (type == "cylinder") {
        Cylinder c{p.at("radius").get<double>(), p.at("half_height").get<double>()};
        if (!(c.radius > 0.0 && c.half_height > 0.0)) throw ConfigError("scene: cylinder dimensions must be > 0");
        shape.geometry = c;
      } else {
        throw ConfigError("scene: unknown primitive type " + type);
      }
      s.object.push_back(shape);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scene: ") + e.what());
  }
  if (s.object.empty()) throw ConfigError("scene: object has no primitives");
  if (!(s.params.contact_epsilon > 0.0)) throw ConfigError("scene: contact_epsilon must be > 0");
  if (s.object_bottom() < s.table_height - 1e-6) throw ConfigError("scene: object starts below the table");
  s.initial_height = s.pose.translation().z();
  return s;
}

json scene_geometry_to_json(const SceneState& s) {
  json prims = json::array();
  for (const ObjectShape& shape : s.object) {
    json p;
    std::visit(overloaded{
                   [&](const Sphere& sp) { p = {{"type", "sphere"}, {"radius", sp.radius}}; },
                   [&](const Box& b) { p = {{"type", "box"}, {"half_extents", vec3_to(b.half_extents)}}; },
                   [&](const Cylinder& c) {
                     p = {{"type", "cylinder"}, {"radius", c.radius}, {"half_height", c.half_height}};
                   },
               },
               shape.geometry);
    p["position"] = vec3_to(shape.local.translation());
    p["rpy"] = vec3_to(matrix_to_euler_xyz(shape.local.linear()));
    prims.push_back(std::move(p));
  }
  return {{"table_height", s.table_height},
          {"contact_epsilon", s.params.contact_epsilon},
          {"opposition_angle_deg", s.params.opposition_angle * 180.0 / kPi},
          {"gravity", s.params.gravity},
          {"object",
           {{"position", vec3_to(s.pose.translation())},
            {"rpy", vec3_to(matrix_to_euler_xyz(s.pose.linear()))},
            {"primitives", prims}}}};
}

SceneState load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_scene(doc);
}

SceneState default_cube_scene() {
  return parse_scene(json{{"table_height", 0.0},
                          {"object",
                           {{"position", {0.0, 0.0, 0.03}},
                            {"primitives", {{{"type", "box"}, {"half_extents", {0.03, 0.03, 0.03}}}}}}}});
}

}  // namespace handretarget
