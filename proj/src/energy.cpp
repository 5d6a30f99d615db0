#include "handretarget/energy.hpp"

#include <cmath>

namespace handretarget {

using nlohmann::json;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

EnergyWeights::EnergyWeights() {
  joint.fill(1.0);
  joint[fingertip_index(0)] = 10.0;
  for (std::size_t f = 1; f < kFingers; ++f) joint[fingertip_index(f)] = 3.0;
}

void EnergyWeights::validate() const {
  const bool non_negative = pose >= 0 && task >= 0 && position >= 0 && angle >= 0 && palm >= 0 && fingertip >= 0;
  if (!non_negative) throw ConfigError("energy weights must be non-negative");
  double joint_sum = 0.0;
  for (double wj : joint) {
    if (!(wj >= 0.0)) throw ConfigError("joint weights must be non-negative");
    joint_sum += wj;
  }
  if (!(joint_sum > 0.0)) throw ConfigError("joint weights must not all be zero");
  if (!(5.0 * fingertip + palm > 0.0)) throw ConfigError("palm and fingertip weights must not both be zero");
  if (!(omega_cost >= 1.0)) throw ConfigError("omega_cost must be >= 1");
  if (!(d_max > 0.0)) throw ConfigError("d_max must be > 0");
}

EnergyWeights EnergyWeights::normalized() const {
  validate();
  EnergyWeights w = *this;
  const double mix = pose + task;
  const double split = position + angle;
  if (!(mix > 0.0) || !(split > 0.0)) throw ConfigError("weight pairs must not sum to zero");
  w.pose = pose / mix;
  w.task = task / mix;
  w.position = position / split;
  w.angle = angle / split;
  return w;
}

EnergyWeights parse_energy_weights(const json& doc) {
  EnergyWeights w;
  try {
    w.pose = doc.value("omega_pose", w.pose);
    w.task = doc.value("omega_task", w.task);
    // A lone omega_task implies its complement.
    if (doc.contains("omega_task") && !doc.contains("omega_pose")) w.pose = 1.0 - w.task;
    w.position = doc.value("omega_p", w.position);
    w.angle = doc.value("omega_a", w.angle);
    if (doc.contains("omega_joint")) {
      const auto j = doc["omega_joint"].get<std::vector<double>>();
      if (j.size() != kSkeletonPoints) throw ConfigError("omega_joint must have 21 entries");
      std::copy(j.begin(), j.end(), w.joint.begin());
    }
    w.palm = doc.value("omega_palm", w.palm);
    w.fingertip = doc.value("omega_ee", w.fingertip);
    w.omega_cost = doc.value("omega_cost", w.omega_cost);
    w.d_max = doc.value("d_max", w.d_max);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("weights: ") + e.what());
  }
  return w.normalized();
}

json to_json(const EnergyWeights& w) {
  return {{"omega_pose", w.pose},   {"omega_task", w.task},      {"omega_p", w.position},
          {"omega_a", w.angle},     {"omega_joint", w.joint},    {"omega_palm", w.palm},
          {"omega_ee", w.fingertip}, {"omega_cost", w.omega_cost}, {"d_max", w.d_max}};
}

namespace {

double weighted_point_error(const Skeleton& xs, const Skeleton& y, double span_sum,
                            const std::array<double, kSkeletonPoints>& wj) {
  if (!(span_sum > 0.0)) throw DegenerateInput("e_position: zero hand span");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < kSkeletonPoints; ++i) {
    num += wj[i] * ((xs[i] - y[i]) / span_sum).squaredNorm();
    den += wj[i];
  }
  return num / den;
}

double angle_error(const JointAngles& ax, const JointAngles& ay) {
  double sum = 0.0;
  for (std::size_t i = 0; i < kAngles; ++i) {
    const double d = (ax.angles[i] - ay.angles[i]) / kPi;
    sum += d * d;
  }
  return sum / static_cast<double>(kAngles);
}

}  // namespace

double e_position(const Skeleton& x_scaled, const Skeleton& y,
                  const std::array<double, kSkeletonPoints>& joint_weights) {
  return weighted_point_error(x_scaled, y, hand_span(x_scaled) + hand_span(y), joint_weights);
}

double e_angle(const Skeleton& x, const Skeleton& y) { return angle_error(joint_angles(x), joint_angles(y)); }

double e_pose(const Skeleton& x, const Skeleton& y, const EnergyWeights& w) {
  const Skeleton xs = normalize_skeleton(x, scale_factor(x, y));
  double e = w.position * e_position(xs, y, w.joint);
  if (w.angle != 0.0) e += w.angle * e_angle(x, y);
  return e;
}

double e_task(const ContactSet& contacts, const EnergyWeights& w) {
  if (contacts.d_max != w.d_max || contacts.omega_cost != w.omega_cost) {
    throw ConfigError("e_task: contact set was built with different d_max / omega_cost");
  }
  const double scale = w.omega_cost * w.d_max;
  const auto term = [&](std::size_t i) {
    const double r = contacts.entries[i].distance / scale;
    return r * r;
  };
  double tips = 0.0;
  for (std::size_t i = 1; i < kContactPoints; ++i) tips += w.fingertip * term(i);
  return (tips + w.palm * term(0)) / (5.0 * w.fingertip + w.palm);
}

double fitness(const Skeleton& x, const Skeleton& y, const ContactSet& contacts, const EnergyWeights& w) {
  double e = 0.0;
  if (w.pose != 0.0) e += w.pose * e_pose(x, y, w);
  if (w.task != 0.0) e += w.task * e_task(contacts, w);
  return e;
}

PoseTarget::PoseTarget(const Skeleton& x, const std::array<double, kBones>& model_bone_lengths) : x_(x) {
  const BoneVectors bx = bone_vectors(x);
  double sum = 0.0;
  for (std::size_t b = 0; b < kBones; ++b) {
    const double nx = bx.vectors[b].norm();
    if (!(nx > 0.0)) throw DegenerateInput("source skeleton has a zero-length bone");
    sum += model_bone_lengths[b] / nx;
  }
  scale_ = sum / static_cast<double>(kBones);
  x_scaled_ = x.scaled(scale_);
  span_scaled_ = hand_span(x_scaled_);
  angles_ = joint_angles(x);
}

double PoseTarget::e_position(const Skeleton& y, const std::array<double, kSkeletonPoints>& joint_weights) const {
  return weighted_point_error(x_scaled_, y, span_scaled_ + hand_span(y), joint_weights);
}

double PoseTarget::e_angle(const Skeleton& y) const { return angle_error(angles_, joint_angles(y)); }

double PoseTarget::e_pose(const Skeleton& y, const EnergyWeights& w) const {
  double e = w.position * e_position(y, w.joint);
  if (w.angle != 0.0) e += w.angle * e_angle(y);
  return e;
}

}  // namespace handretarget
