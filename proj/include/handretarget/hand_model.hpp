#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "handretarget/common.hpp"

namespace handretarget {

/// 21 ordered hand points: wrist, then thumb, index, middle, ring, pinky,
/// each as MCP, PIP, DIP, TIP.
struct Skeleton {
  std::array<Vec3, kSkeletonPoints> joints;

  Vec3& operator[](std::size_t i) { return joints[i]; }
  const Vec3& operator[](std::size_t i) const { return joints[i]; }

  /// Every point multiplied by `k` (scaling about the origin).
  Skeleton scaled(double k) const;
  Skeleton transformed(const Eigen::Isometry3d& t) const;
  bool all_finite() const;

  bool operator==(const Skeleton& other) const { return joints == other.joints; }
};

/// Child minus parent along each finger chain (wrist->MCP->PIP->DIP->TIP),
/// five chains of four bones.
struct BoneVectors {
  std::array<Vec3, kBones> vectors;
};

/// Per finger: (wrist->MCP, MCP->PIP), (MCP->PIP, PIP->DIP), (PIP->DIP, DIP->TIP).
struct JointAngles {
  std::array<double, kAngles> angles;
};

BoneVectors bone_vectors(const Skeleton& s);

/// Throws DegenerateInput on a zero-length bone.
JointAngles joint_angles(const Skeleton& s);

/// Mean per-bone length ratio |J_i(y)| / |J_i(x)|. Throws DegenerateInput
/// when a bone of `x` has zero length.
double scale_factor(const Skeleton& x, const Skeleton& y);

inline Skeleton normalize_skeleton(const Skeleton& x, double s) { return x.scaled(s); }

/// Distance from the wrist to the farthest fingertip.
double hand_span(const Skeleton& s);

struct ActuatorSpec {
  std::string name;
  Vec3 axis;
  double lo = 0.0;
  double hi = 0.0;
  double range() const { return hi - lo; }
};

struct LinkSpec {
  std::string name;
  std::string parent;  // "world" for the root
  Vec3 origin = Vec3::Zero();
  Vec3 rpy = Vec3::Zero();
  std::vector<std::string> actuators;
  std::optional<double> length;
};

struct SkeletonAnchor {
  std::string link;
  Vec3 point = Vec3::Zero();
};

/// Hand model description as stored on disk.
struct HandModelSpec {
  std::string name;
  std::vector<ActuatorSpec> actuators;  // order defines action indices 6..28
  std::vector<LinkSpec> links;
  std::array<SkeletonAnchor, kSkeletonPoints> skeleton;
  Vec3 palm_center = Vec3::Zero();
  std::array<double, kGlobalDofs> global_ranges{0.1, 0.1, 0.1, 0.5, 0.5, 0.5};
  std::optional<Skeleton> rest_skeleton;
};

HandModelSpec parse_hand_model_spec(const nlohmann::json& doc);
nlohmann::json to_json(const HandModelSpec& spec);
HandModelSpec load_hand_model_spec(const std::string& path);

/// Hand frame quantities produced by forward kinematics.
struct HandPose {
  Skeleton skeleton;
  Eigen::Isometry3d palm_frame = Eigen::Isometry3d::Identity();
  Vec3 palm_center = Vec3::Zero();

  Vec3 fingertip(std::size_t f) const { return skeleton[fingertip_index(f)]; }
};

/// Validated, precomputed kinematic tree built from a HandModelSpec.
///
/// The tree must have a single root link (the palm, whose origin is the
/// wrist point) and, for each finger, three chained links whose origins are
/// the finger's MCP, PIP and DIP points with the TIP on the last link.
class HandModel {
 public:
  explicit HandModel(HandModelSpec spec);

  static HandModel load(const std::string& path);

  const HandModelSpec& spec() const { return spec_; }

  /// Skeleton at the all-zero action.
  const Skeleton& rest_skeleton() const { return rest_; }

  /// Bone lengths derived directly from link geometry.
  const std::array<double, kBones>& bone_lengths() const { return bone_lengths_; }

  double lower(std::size_t actuator) const { return spec_.actuators[actuator].lo; }
  double upper(std::size_t actuator) const { return spec_.actuators[actuator].hi; }

  /// Search span of each of the 29 action dimensions (global nominal spans,
  /// then actuator ranges).
  ActuatorVector action_ranges() const;

  /// Joint actuators clamped into their limits; global DoFs untouched.
  ActuatorVector clamp(const ActuatorVector& a) const;

  HandPose forward(const ActuatorVector& a) const;

  struct Link {
    int parent = -1;
    Vec3 origin;
    Mat3 rest_rotation;
    std::vector<int> actuators;
    std::vector<Vec3> axes;
  };
  const std::vector<Link>& links() const { return links_; }

  /// Link index anchoring each skeleton point.
  int anchor_link(std::size_t point) const { return anchor_link_[point]; }
  const Vec3& anchor_point(std::size_t point) const { return spec_.skeleton[point].point; }

  /// Links that carry finger `f`'s MCP, PIP and DIP.
  const std::array<int, 3>& finger_links(std::size_t f) const { return finger_links_[f]; }
  int palm_link() const { return palm_link_; }

  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  HandPose forward_unclamped(const ActuatorVector& a) const;

  HandModelSpec spec_;
  std::vector<Link> links_;  // topologically ordered
  std::array<int, kSkeletonPoints> anchor_link_{};
  std::array<std::array<int, 3>, kFingers> finger_links_{};
  int palm_link_ = 0;
  Skeleton rest_;
  std::array<double, kBones> bone_lengths_{};
  std::uint64_t fingerprint_ = 0;
};

inline HandPose forward_kinematics(const HandModel& model, const ActuatorVector& a) {
  return model.forward(a);
}

/// FNV-1a, used for file fingerprints.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace handretarget
