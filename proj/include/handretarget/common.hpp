#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace handretarget {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr std::size_t kSkeletonPoints = 21;
inline constexpr std::size_t kBones = kSkeletonPoints - 1;
inline constexpr std::size_t kAngles = 15;
inline constexpr std::size_t kFingers = 5;
inline constexpr std::size_t kGlobalDofs = 6;
inline constexpr std::size_t kJointActuators = 23;
inline constexpr std::size_t kActionDim = kGlobalDofs + kJointActuators;
inline constexpr std::size_t kContactPoints = 6;

/// Flat 29-real action: [tx ty tz rx ry rz | 23 joint actuators].
using ActuatorVector = Eigen::Matrix<double, static_cast<int>(kActionDim), 1>;

/// Skeleton point index of finger `f` (0 = thumb .. 4 = pinky), joint `j`
/// (0 = MCP, 1 = PIP, 2 = DIP, 3 = TIP).
constexpr std::size_t point_index(std::size_t f, std::size_t j) { return 1 + 4 * f + j; }
constexpr std::size_t kWrist = 0;
constexpr std::size_t fingertip_index(std::size_t f) { return point_index(f, 3); }

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

class ConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "config_error"; }
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "degenerate_input"; }
};

class ValidationError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "validation_error"; }
};

class IoError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "io_error"; }
};

class GenerationError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "generation_error"; }
};

/// Rotation matrix for extrinsic X-Y-Z Euler angles, i.e. Rz * Ry * Rx.
Mat3 euler_xyz_to_matrix(const Vec3& rpy);

/// Inverse of euler_xyz_to_matrix. At gimbal lock the X angle is set to
/// `x_hint` and the remaining rotation goes into Z.
Vec3 matrix_to_euler_xyz(const Mat3& r, double x_hint = 0.0);

/// Rodrigues rotation about a unit axis.
Mat3 axis_angle(const Vec3& unit_axis, double angle);

}  // namespace handretarget
