#include "handretarget/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "handretarget/hybrid.hpp"
#include "handretarget/pipeline.hpp"

namespace handretarget {

namespace {

constexpr double kPalmGap = 0.002;    // palm center clearance above the object
constexpr double kTipTouch = 0.001;   // a finger stops curling at this clearance
constexpr double kCurlStep = 0.002;   // curl parameter resolution
constexpr double kCurlReach = 0.9;    // fraction of each flexion limit at full curl
constexpr double kThumbAbduct = 0.5;  // fraction of the thumb abduction limit

struct FingerJoints {
  int abduction = -1;           // action index
  std::vector<int> flexion;     // action indices, proximal first
};

FingerJoints finger_joints(const HandModel& model, std::size_t f) {
  FingerJoints fj;
  for (int li : model.finger_links(f)) {
    const HandModel::Link& link = model.links()[li];
    for (std::size_t k = 0; k < link.actuators.size(); ++k) {
      const int idx = static_cast<int>(kGlobalDofs) + link.actuators[k];
      const Vec3& axis = link.axes[k];
      if (std::abs(axis.z()) > std::abs(axis.y()) && fj.abduction < 0) {
        fj.abduction = idx;
      } else {
        fj.flexion.push_back(idx);
      }
    }
  }
  return fj;
}

void set_curl(ActuatorVector& a, const HandModel& model, const FingerJoints& fj, double kappa) {
  for (int idx : fj.flexion) a[idx] = kappa * kCurlReach * model.upper(idx - kGlobalDofs);
}

/// Smallest clearance between any of finger `f`'s points and the object, and
/// the fingertip clearance.
std::pair<double, double> finger_clearance(const HandPose& pose, const SceneState& scene, std::size_t f) {
  double any = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < 4; ++j) any = std::min(any, object_distance(pose.skeleton[point_index(f, j)], scene));
  return {any, object_distance(pose.fingertip(f), scene)};
}

/// Curls finger `f` from straight until any of its points first reaches the
/// touch clearance; returns true if the fingertip is the touching point.
bool curl_until_touch(ActuatorVector& a, const HandModel& model, const SceneState& scene, std::size_t f) {
  const FingerJoints fj = finger_joints(model, f);
  for (double kappa = 0.0; kappa <= 1.0 + 1e-12; kappa += kCurlStep) {
    set_curl(a, model, fj, kappa);
    const auto [any, tip] = finger_clearance(model.forward(a), scene, f);
    if (any <= kTipTouch) return tip <= kTipTouch;
  }
  set_curl(a, model, fj, 0.0);
  return false;
}

double palm_height(const SceneState& scene, const Vec3& xy_point) {
  double lo = scene.center().z() - 1.0;
  double hi = scene.center().z() + 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double d = object_distance(Vec3(xy_point.x(), xy_point.y(), mid), scene);
    if (d > kPalmGap) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double lerp_ease(double s) { return s * s * (3.0 - 2.0 * s); }

}  // namespace

GraspPose find_grasp(const SceneState& scene, const HandModel& model, double yaw) {
  static constexpr double kOffsets[] = {0.0, 0.005, 0.01, -0.005, 0.015, 0.02, -0.01};
  const Mat3 r = Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix();

  for (double u : kOffsets) {
    ActuatorVector a = ActuatorVector::Zero();
    a[5] = yaw;
    const FingerJoints thumb = finger_joints(model, 0);
    if (thumb.abduction >= 0) a[thumb.abduction] = kThumbAbduct * model.upper(thumb.abduction - kGlobalDofs);

    const Vec3 planar = scene.center() + r * Vec3(u, 0.0, 0.0);
    const Vec3 palm_target(planar.x(), planar.y(), palm_height(scene, planar));
    const Vec3 pc = model.forward(a).palm_center;
    a.head<3>() = palm_target - pc;

    GraspPose g;
    g.open = a;
    std::size_t tips = 0;
    for (std::size_t f = 1; f < kFingers; ++f)
      if (curl_until_touch(a, model, scene, f)) ++tips;
    if (curl_until_touch(a, model, scene, 0)) ++tips;
    g.grasp = a;
    g.touching_tips = tips;

    const HandContactPoints hand = contact_points(model.forward(a));
    if (tips >= 2 && grasp_rule(hand, scene)) return g;
  }
  throw GenerationError("no grasp placement found for the object from the scripted approach");
}

std::vector<SynthTrajectory> synth_generate_detailed(const SceneState& scene, const HandModel& model,
                                                     const SynthOptions& opt) {
  if (!(opt.sigma >= 0.0) || !std::isfinite(opt.sigma)) throw ConfigError("synth: sigma must be >= 0");
  if (!(opt.rate > 0.0)) throw ConfigError("synth: rate must be > 0");
  if (!(opt.domain_scale > 0.0)) throw ConfigError("synth: domain scale must be > 0");

  std::vector<SynthTrajectory> out;
  out.reserve(opt.count);
  for (std::size_t n = 0; n < opt.count; ++n) {
    char id[32];
    std::snprintf(id, sizeof id, "synth_%03zu", n);
    Rng rng(trajectory_seed(opt.seed, id));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const double yaw = -0.3 + 0.6 * unit(rng);
    const double lift = 0.20 + 0.06 * unit(rng);
    const double side = -0.03 + 0.06 * unit(rng);
    const int hold_close = 8 + static_cast<int>(8 * unit(rng));
    const int hold_end = 10 + static_cast<int>(10 * unit(rng));

    const GraspPose g = find_grasp(scene, model, yaw);
    const Mat3 r = Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix();

    ActuatorVector above = g.open;
    above[2] += 0.04;
    ActuatorVector start = above;
    start.head<3>() += r * Vec3(-0.12, side, 0.0) + Vec3(0.0, 0.0, 0.08);
    ActuatorVector lifted = g.grasp;
    lifted[2] += lift;

    struct Segment {
      const ActuatorVector* from;
      const ActuatorVector* to;
      int frames;
    };
    const Segment segments[] = {{&start, &above, 40},     {&above, &g.open, 20},     {&g.open, &g.grasp, 30},
                                {&g.grasp, &g.grasp, hold_close}, {&g.grasp, &lifted, 60}, {&lifted, &lifted, hold_end}};

    SynthTrajectory t;
    t.script.push_back(start);
    for (const Segment& s : segments) {
      for (int k = 1; k <= s.frames; ++k) {
        const double e = lerp_ease(static_cast<double>(k) / s.frames);
        t.script.push_back((1.0 - e) * *s.from + e * *s.to);
      }
    }

    std::normal_distribution<double> noise(0.0, 1.0);
    t.clean.id = id;
    t.noisy.id = id;
    for (std::size_t k = 0; k < t.script.size(); ++k) {
      InputFrame f;
      f.timestamp = static_cast<double>(k) / opt.rate;
      f.joints = model.forward(t.script[k]).skeleton.scaled(opt.domain_scale);
      t.clean.frames.push_back(f);
      if (opt.sigma > 0.0) {
        for (Vec3& p : f.joints.joints)
          for (int c = 0; c < 3; ++c) p[c] += opt.sigma * noise(rng);
      }
      t.noisy.frames.push_back(std::move(f));
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<InputTrajectory> synth_generate(const SceneState& scene, const HandModel& model,
                                            const SynthOptions& opt) {
  std::vector<InputTrajectory> out;
  for (SynthTrajectory& t : synth_generate_detailed(scene, model, opt)) out.push_back(std::move(t.noisy));
  return out;
}

}  // namespace handretarget
