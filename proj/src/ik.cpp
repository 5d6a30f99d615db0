#include "handretarget/ik.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace handretarget {

using nlohmann::json;

void IkConfig::validate() const {
  if (max_passes < 1) throw ConfigError("ik.max_passes must be >= 1");
}

IkConfig parse_ik_config(const json& doc) {
  IkConfig c;
  try {
    c.max_passes = doc.value("max_passes", c.max_passes);
    c.clamp_to_limits = doc.value("clamp_to_limits", c.clamp_to_limits);
    c.warm_start = doc.value("warm_start", c.warm_start);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("ik: ") + e.what());
  }
  c.validate();
  return c;
}

json to_json(const IkConfig& c) {
  return {{"max_passes", c.max_passes}, {"clamp_to_limits", c.clamp_to_limits}, {"warm_start", c.warm_start}};
}

namespace {

constexpr std::array<std::size_t, 6> kPalmPoints = {kWrist,           point_index(0, 0), point_index(1, 0),
                                                    point_index(2, 0), point_index(3, 0), point_index(4, 0)};

// Signed rotation about unit axis k taking u onto v once both are projected
// onto the plane orthogonal to k; nullopt when either projection vanishes.
std::optional<double> projected_angle(const Vec3& k, const Vec3& u, const Vec3& v) {
  const Vec3 pu = u - u.dot(k) * k;
  const Vec3 pv = v - v.dot(k) * k;
  constexpr double kRel = 1e-9;
  if (pu.norm() <= kRel * u.norm() || pv.norm() <= kRel * v.norm()) return std::nullopt;
  return std::atan2(k.dot(pu.cross(pv)), pu.dot(pv));
}

}  // namespace

ActuatorVector ik_retarget(const Skeleton& x, const HandModel& model, const std::optional<ActuatorVector>& prev,
                           const IkConfig& cfg) {
  cfg.validate();
  if (!x.all_finite()) throw DegenerateInput("ik_retarget: non-finite target skeleton");
  const bool warm = cfg.warm_start && prev.has_value();

  Eigen::Matrix<double, 3, 6> src;
  Eigen::Matrix<double, 3, 6> dst;
  for (std::size_t i = 0; i < kPalmPoints.size(); ++i) {
    src.col(i) = model.rest_skeleton()[kPalmPoints[i]];
    dst.col(i) = x[kPalmPoints[i]];
  }
  {
    const Eigen::Matrix<double, 3, 6> centered = dst.colwise() - dst.rowwise().mean();
    const Vec3 sv = Eigen::JacobiSVD<Eigen::Matrix<double, 3, 6>>(centered).singularValues();
    if (!(sv[0] > 0.0) || sv[1] < 1e-6 * sv[0]) throw DegenerateInput("ik_retarget: degenerate (collinear) palm");
  }
  const Eigen::Matrix4d fit = Eigen::umeyama(src, dst, false);
  const Mat3 r_global = fit.topLeftCorner<3, 3>();

  ActuatorVector a = ActuatorVector::Zero();
  a.head<3>() = fit.topRightCorner<3, 1>();
  a.segment<3>(3) = matrix_to_euler_xyz(r_global, warm ? (*prev)[3] : 0.0);
  const Mat3 r_root = euler_xyz_to_matrix(a.segment<3>(3));

  const auto& links = model.links();
  const auto& palm = links[model.palm_link()];
  const Mat3 palm_rotation = r_root * palm.rest_rotation;  // wrist actuators at zero

  for (std::size_t f = 0; f < kFingers; ++f) {
    const auto& chain = model.finger_links(f);
    Mat3 parent_rotation = palm_rotation;
    for (std::size_t j = 0; j < 3; ++j) {
      const auto& link = links[chain[j]];
      const Vec3 bone_local = j < 2 ? links[chain[j + 1]].origin : model.anchor_point(fingertip_index(f));
      const Vec3 target_world = x[point_index(f, j + 1)] - x[point_index(f, j)];
      const Mat3 base = parent_rotation * link.rest_rotation;
      const Vec3 target = base.transpose() * target_world;

      const std::size_t m = link.actuators.size();
      std::vector<double> q(m, 0.0);
      for (std::size_t k = 0; k < m; ++k) {
        const std::size_t idx = kGlobalDofs + link.actuators[k];
        if (warm) q[k] = std::clamp((*prev)[idx], model.lower(link.actuators[k]), model.upper(link.actuators[k]));
      }
      for (int pass = 0; pass < cfg.max_passes; ++pass) {
        double change = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
          Mat3 pre = Mat3::Identity();
          for (std::size_t i = 0; i < k; ++i) pre = pre * axis_angle(link.axes[i], q[i]);
          Mat3 post = Mat3::Identity();
          for (std::size_t i = m; i-- > k + 1;) post = axis_angle(link.axes[i], q[i]) * post;
          const auto angle = projected_angle(link.axes[k], post * bone_local, pre.transpose() * target);
          if (!angle) continue;
          double value = *angle;
          if (cfg.clamp_to_limits) {
            value = std::clamp(value, model.lower(link.actuators[k]), model.upper(link.actuators[k]));
          }
          change = std::max(change, std::abs(value - q[k]));
          q[k] = value;
        }
        if (m <= 1 || change < 1e-12) break;
      }

      Mat3 rotation = base;
      for (std::size_t k = 0; k < m; ++k) {
        a[kGlobalDofs + link.actuators[k]] = q[k];
        rotation = rotation * axis_angle(link.axes[k], q[k]);
      }
      parent_rotation = rotation;
    }
  }
  return a;
}

}  // namespace handretarget
