#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "handretarget/common.hpp"

namespace handretarget {

struct Sphere {
  double radius = 0.0;
};

struct Box {
  Vec3 half_extents = Vec3::Zero();
};

/// Axis along the local z direction.
struct Cylinder {
  double radius = 0.0;
  double half_height = 0.0;
};

/// One analytic primitive, posed relative to the object frame.
struct ObjectShape {
  std::variant<Sphere, Box, Cylinder> geometry;
  Eigen::Isometry3d local = Eigen::Isometry3d::Identity();
};

/// Unsigned distance from `p` (object frame) to the surface of `shape`; 0 inside.
double point_shape_distance(const Vec3& p_object, const ObjectShape& shape);

/// Unsigned distance from a world point to a primitive placed at `object_pose`.
double point_object_distance(const Vec3& p_world, const ObjectShape& shape,
                             const Eigen::Isometry3d& object_pose = Eigen::Isometry3d::Identity());

/// Lowest world z of the primitive under `object_pose`.
double lowest_point_z(const ObjectShape& shape, const Eigen::Isometry3d& object_pose);

struct SceneParams {
  double contact_epsilon = 0.005;        // m, "touching"
  double opposition_angle = 1.5707963267948966;  // rad, strict lower bound
  double gravity = 9.81;                 // m/s^2
};

struct SceneState {
  std::vector<ObjectShape> object;  // rigid union sharing `pose`
  Eigen::Isometry3d pose = Eigen::Isometry3d::Identity();
  Vec3 velocity = Vec3::Zero();
  double table_height = 0.0;
  bool held = false;
  double initial_height = 0.0;  // object center z at load
  std::optional<Eigen::Isometry3d> last_palm;
  SceneParams params;

  double object_bottom() const;
  Vec3 center() const { return pose.translation(); }
};

/// Palm center plus the five fingertips, and the palm frame the object is
/// welded to while held.
struct HandContactPoints {
  Vec3 palm = Vec3::Zero();
  std::array<Vec3, kFingers> fingertips{};
  Eigen::Isometry3d palm_frame = Eigen::Isometry3d::Identity();

  const Vec3& point(std::size_t i) const { return i == 0 ? palm : fingertips[i - 1]; }
};

struct ContactEntry {
  double distance = 0.0;  // after the missing substitution
  double raw = 0.0;       // unthresholded minimum distance
  bool missing = false;
};

/// Palm center first, then the five fingertips.
struct ContactSet {
  std::array<ContactEntry, kContactPoints> entries{};
  double d_max = 0.04;
  double omega_cost = 2.0;

  std::size_t touching(double epsilon) const;
  std::size_t present() const;
};

/// Minimum distance from `p` over all primitives of the scene's object.
double object_distance(const Vec3& p_world, const SceneState& scene);

ContactSet contact_distances(const HandContactPoints& hand, const SceneState& scene, double d_max,
                             double omega_cost);

/// True when >= 2 points are within contact_epsilon and at least one pair of
/// touching points, seen from the object center, subtends more than the
/// opposition angle.
bool grasp_rule(const HandContactPoints& hand, const SceneState& scene);

/// Quasi-static grasp proxy: welded attachment while the grasp rule holds,
/// ballistic flight otherwise, inelastic landing on the table.
SceneState step_scene(const SceneState& scene, const HandContactPoints& hand, double dt);

SceneState parse_scene(const nlohmann::json& doc);
nlohmann::json scene_geometry_to_json(const SceneState& scene);
SceneState load_scene(const std::string& path);

/// Default shipped scene: 6 cm cube resting on a table at z = 0.
SceneState default_cube_scene();

}  // namespace handretarget
