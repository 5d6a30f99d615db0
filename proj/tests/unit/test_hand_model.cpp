#include <cmath>
#include <fstream>
#include <map>

#include <gtest/gtest.h>
#include <json.hpp>

#include "fixtures.hpp"
#include "generators.hpp"
#include "handretarget/hand_model.hpp"

using namespace handretarget;
using namespace handretarget::testing;

namespace {

/// Independent FK: homogeneous transforms composed link by link from the
/// spec, resolving parents by name.
Skeleton transform_chain_fk(const HandModelSpec& spec, const ActuatorVector& a) {
  std::map<std::string, std::size_t> act_index;
  for (std::size_t i = 0; i < spec.actuators.size(); ++i) act_index[spec.actuators[i].name] = i;
  std::map<std::string, const LinkSpec*> by_name;
  for (const LinkSpec& l : spec.links) by_name[l.name] = &l;

  Eigen::Isometry3d root = Eigen::Isometry3d::Identity();
  root.translate(Vec3(a[0], a[1], a[2]));
  root.rotate(Eigen::AngleAxisd(a[5], Vec3::UnitZ()));
  root.rotate(Eigen::AngleAxisd(a[4], Vec3::UnitY()));
  root.rotate(Eigen::AngleAxisd(a[3], Vec3::UnitX()));

  std::function<Eigen::Isometry3d(const std::string&)> world = [&](const std::string& name) {
    const LinkSpec& l = *by_name.at(name);
    Eigen::Isometry3d t = l.parent == "world" ? root : world(l.parent);
    t.translate(l.origin);
    t.rotate(Eigen::AngleAxisd(l.rpy.z(), Vec3::UnitZ()));
    t.rotate(Eigen::AngleAxisd(l.rpy.y(), Vec3::UnitY()));
    t.rotate(Eigen::AngleAxisd(l.rpy.x(), Vec3::UnitX()));
    for (const std::string& an : l.actuators) {
      const std::size_t k = act_index.at(an);
      const double q = std::clamp(a[kGlobalDofs + k], spec.actuators[k].lo, spec.actuators[k].hi);
      t.rotate(Eigen::AngleAxisd(q, spec.actuators[k].axis));
    }
    return t;
  };

  Skeleton s;
  for (std::size_t p = 0; p < kSkeletonPoints; ++p) s[p] = world(spec.skeleton[p].link) * spec.skeleton[p].point;
  return s;
}

double max_point_error(const Skeleton& a, const Skeleton& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < kSkeletonPoints; ++i) e = std::max(e, (a[i] - b[i]).norm());
  return e;
}

nlohmann::json shipped_spec_json() {
  std::ifstream in(data_path("hand_model.json"));
  return nlohmann::json::parse(in);
}

}  // namespace

TEST(ForwardKinematics, ZeroActionIsStoredRestPoseBitExact) {
  const HandModel& m = default_model();
  ASSERT_TRUE(m.spec().rest_skeleton.has_value());
  const Skeleton y = m.forward(ActuatorVector::Zero()).skeleton;
  EXPECT_TRUE(y == *m.spec().rest_skeleton);
}

TEST(ForwardKinematics, GlobalTranslationShiftsEveryPoint) {
  const HandModel& m = default_model();
  ActuatorVector a = ActuatorVector::Zero();
  a[0] = 0.1;
  const Skeleton y = m.forward(a).skeleton;
  for (std::size_t i = 0; i < kSkeletonPoints; ++i) {
    EXPECT_NEAR((y[i] - m.rest_skeleton()[i] - Vec3(0.1, 0, 0)).norm(), 0.0, 1e-15);
  }
}

TEST(ForwardKinematics, SinglePipMatchesTransformChainOracle) {
  const HandModel& m = default_model();
  std::size_t pip = 0;
  for (std::size_t i = 0; i < kJointActuators; ++i)
    if (m.spec().actuators[i].name == "index_pip") pip = i;
  ActuatorVector a = ActuatorVector::Zero();
  a[kGlobalDofs + pip] = M_PI / 4;
  const Skeleton y = m.forward(a).skeleton;
  EXPECT_LT(max_point_error(y, transform_chain_fk(m.spec(), a)), 1e-12);

  // Points past the PIP rotate by pi/4 about the PIP axis; the rest stay put.
  const Skeleton& rest = m.rest_skeleton();
  const std::size_t pip_point = point_index(1, 1);
  for (std::size_t i = 0; i < kSkeletonPoints; ++i) {
    if (i == point_index(1, 2) || i == point_index(1, 3)) {
      const double before = (rest[i] - rest[pip_point]).norm();
      EXPECT_NEAR((y[i] - y[pip_point]).norm(), before, 1e-12);
      const Vec3 u = (rest[i] - rest[pip_point]).normalized();
      const Vec3 v = (y[i] - y[pip_point]).normalized();
      EXPECT_NEAR(std::acos(std::clamp(u.dot(v), -1.0, 1.0)), M_PI / 4, 1e-9);
    } else {
      EXPECT_LT((y[i] - rest[i]).norm(), 1e-15) << "point " << i;
    }
  }
}

TEST(ForwardKinematics, RandomActionsMatchTransformChainOracle) {
  const HandModel& m = default_model();
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    const ActuatorVector a = random_action(m, rng);
    EXPECT_LT(max_point_error(m.forward(a).skeleton, transform_chain_fk(m.spec(), a)), 1e-12);
  }
}

TEST(ForwardKinematics, OutOfLimitActionsAreClamped) {
  const HandModel& m = default_model();
  Rng rng(12);
  ActuatorVector a = random_action(m, rng);
  ActuatorVector wild = a;
  for (std::size_t j = 0; j < kJointActuators; ++j) wild[kGlobalDofs + j] += (j % 2 ? 5.0 : -5.0);
  EXPECT_TRUE(m.forward(wild).skeleton == m.forward(m.clamp(wild)).skeleton);
  const ActuatorVector c = m.clamp(wild);
  for (std::size_t j = 0; j < kJointActuators; ++j) {
    EXPECT_GE(c[kGlobalDofs + j], m.lower(j));
    EXPECT_LE(c[kGlobalDofs + j], m.upper(j));
  }
}

TEST(ForwardKinematics, RigidMotionEquivariance) {
  const HandModel& m = default_model();
  Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    ActuatorVector a = random_action(m, rng);
    const Eigen::Isometry3d g = random_rigid(rng, 0.3);
    const Mat3 r0 = euler_xyz_to_matrix(a.segment<3>(3));
    ActuatorVector b = a;
    b.head<3>() = g * Vec3(a.head<3>());
    b.segment<3>(3) = matrix_to_euler_xyz(g.linear() * r0);
    EXPECT_LT(max_point_error(m.forward(b).skeleton, m.forward(a).skeleton.transformed(g)), 1e-9);
  }
}

TEST(ForwardKinematics, BoneLengthsInvariantUnderActuation) {
  const HandModel& m = default_model();
  Rng rng(14);
  for (int i = 0; i < 200; ++i) {
    const BoneVectors bv = bone_vectors(m.forward(random_action(m, rng)).skeleton);
    for (std::size_t b = 0; b < kBones; ++b) EXPECT_NEAR(bv.vectors[b].norm(), m.bone_lengths()[b], 1e-9);
  }
}

TEST(ForwardKinematics, RestBonesMatchLinkLengthsInFile) {
  const nlohmann::json doc = shipped_spec_json();
  const HandModel& m = default_model();
  const BoneVectors bv = bone_vectors(m.rest_skeleton());
  const char* fingers[] = {"thumb", "index", "middle", "ring", "pinky"};
  const char* links[] = {"proximal", "middle", "distal"};
  for (std::size_t f = 0; f < kFingers; ++f) {
    for (std::size_t k = 0; k < 3; ++k) {
      const std::string name = std::string(fingers[f]) + "_" + links[k];
      double length = -1;
      for (const auto& l : doc["links"])
        if (l["name"] == name) length = l["length"].get<double>();
      EXPECT_NEAR(bv.vectors[4 * f + 1 + k].norm(), length, 1e-12) << name;
    }
  }
}

TEST(ForwardKinematics, RestSkeletonIsAdultHandScale) {
  const Skeleton& r = default_model().rest_skeleton();
  const double span = hand_span(r);
  EXPECT_GT(span, 0.15);
  EXPECT_LT(span, 0.22);
}

TEST(BoneVectors, StraightFingerVectorsAreParallel) {
  Skeleton s = default_model().rest_skeleton();
  const BoneVectors bv = bone_vectors(s);
  for (std::size_t k = 2; k < 4; ++k) {
    EXPECT_LT(bv.vectors[4 * 1 + 1].normalized().cross(bv.vectors[4 * 1 + k].normalized()).norm(), 1e-12);
  }
}

TEST(BoneVectors, ScaleLinearly) {
  Rng rng(15);
  const Skeleton s = random_skeleton(rng);
  const BoneVectors a = bone_vectors(s), b = bone_vectors(s.scaled(2.5));
  for (std::size_t i = 0; i < kBones; ++i) EXPECT_LT((b.vectors[i] - 2.5 * a.vectors[i]).norm(), 1e-12);
}

TEST(JointAngles, StraightFingerIsZero) {
  const JointAngles th = joint_angles(default_model().rest_skeleton());
  for (std::size_t f = 1; f < kFingers; ++f)
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(th.angles[3 * f + k], 0.0, 1e-7);
}

TEST(JointAngles, RightAngleAtPip) {
  Skeleton s = default_model().rest_skeleton();
  // Bend the index finger 90 degrees at the PIP within the x-z plane.
  const Vec3 pip = s[point_index(1, 1)];
  const Vec3 dir = (s[point_index(1, 1)] - s[point_index(1, 0)]).normalized();
  const Vec3 down = dir.cross(Vec3::UnitZ()).cross(dir).normalized();
  s[point_index(1, 2)] = pip + 0.025 * down;
  s[point_index(1, 3)] = pip + 0.045 * down;
  const JointAngles th = joint_angles(s);
  EXPECT_NEAR(th.angles[3 * 1 + 1], M_PI / 2, 1e-12);
  EXPECT_NEAR(th.angles[3 * 1 + 2], 0.0, 1e-7);
}

TEST(JointAngles, InvariantUnderRigidMotionAndScale) {
  Rng rng(16);
  for (int i = 0; i < 100; ++i) {
    const Skeleton s = random_skeleton(rng);
    const JointAngles a = joint_angles(s);
    const JointAngles b = joint_angles(s.transformed(random_rigid(rng)).scaled(uniform(rng, 0.1, 10)));
    for (std::size_t k = 0; k < kAngles; ++k) {
      EXPECT_NEAR(a.angles[k], b.angles[k], 1e-9);
      EXPECT_GE(a.angles[k], 0.0);
      EXPECT_LE(a.angles[k], M_PI);
    }
  }
}

TEST(JointAngles, ZeroBoneThrows) {
  Skeleton s = default_model().rest_skeleton();
  s[point_index(2, 2)] = s[point_index(2, 1)];
  EXPECT_THROW(joint_angles(s), DegenerateInput);
}

TEST(ScaleFactor, TwiceAsLong) {
  const Skeleton& y = default_model().rest_skeleton();
  EXPECT_NEAR(scale_factor(y.scaled(0.5), y), 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(scale_factor(y, y), 1.0);
}

TEST(ScaleFactor, AlternatingRatiosMatchSummation) {
  Rng rng(17);
  const Skeleton y = random_skeleton(rng);
  const BoneVectors by = bone_vectors(y);
  // Build x bone by bone with ratio pattern 1, 2, 1, 2, ... (x bone = y bone / ratio).
  Skeleton x;
  x[kWrist] = y[kWrist];
  double expected = 0.0;
  for (std::size_t f = 0; f < kFingers; ++f) {
    Vec3 prev = x[kWrist];
    for (std::size_t j = 0; j < 4; ++j) {
      const std::size_t b = 4 * f + j;
      const double ratio = (b % 2 == 0) ? 1.0 : 2.0;
      prev = prev + by.vectors[b] / ratio;
      x[point_index(f, j)] = prev;
      expected += ratio;
    }
  }
  expected /= kBones;
  EXPECT_NEAR(scale_factor(x, y), expected, 1e-12);
}

TEST(ScaleFactor, ScalingSourceDividesFactor) {
  Rng rng(18);
  for (int i = 0; i < 50; ++i) {
    const Skeleton x = random_skeleton(rng), y = random_skeleton(rng);
    const double k = uniform(rng, 0.1, 10.0);
    EXPECT_NEAR(scale_factor(x.scaled(k), y), scale_factor(x, y) / k, 1e-9 * scale_factor(x, y));
  }
}

TEST(ScaleFactor, ReciprocalForUniformRatios) {
  Rng rng(19);
  const Skeleton y = random_skeleton(rng);
  const Skeleton x = y.scaled(0.37);
  EXPECT_NEAR(scale_factor(x, y) * scale_factor(y, x), 1.0, 1e-9);
}

TEST(ScaleFactor, ZeroBoneInSourceThrows) {
  Skeleton x = default_model().rest_skeleton();
  x[point_index(0, 0)] = x[kWrist];
  EXPECT_THROW(scale_factor(x, default_model().rest_skeleton()), DegenerateInput);
}

TEST(HandModelSpec, ShippedSpecRoundTripsThroughJson) {
  const HandModelSpec& spec = default_model().spec();
  const HandModel again(parse_hand_model_spec(to_json(spec)));
  EXPECT_EQ(again.fingerprint(), default_model().fingerprint());
}

TEST(HandModelSpec, CycleIsRejected) {
  nlohmann::json doc = shipped_spec_json();
  for (auto& l : doc["links"])
    if (l["name"] == "palm") l["parent"] = "index_distal";
  EXPECT_THROW(HandModel(parse_hand_model_spec(doc)), ConfigError);
}

TEST(HandModelSpec, MissingParentIsRejected) {
  nlohmann::json doc = shipped_spec_json();
  doc["links"][3]["parent"] = "no_such_link";
  EXPECT_THROW(HandModel(parse_hand_model_spec(doc)), ConfigError);
}

TEST(HandModelSpec, NonUnitAxisIsRejected) {
  nlohmann::json doc = shipped_spec_json();
  doc["actuators"][5]["axis"] = {0.0, 2.0, 0.0};
  EXPECT_THROW(HandModel(parse_hand_model_spec(doc)), ConfigError);
}

TEST(HandModelSpec, ZeroLengthLinkIsRejected) {
  nlohmann::json doc = shipped_spec_json();
  doc.erase("rest_skeleton");
  for (auto& l : doc["links"])
    if (l["name"] == "ring_middle") l["origin"] = {0.0, 0.0, 0.0};
  EXPECT_THROW(HandModel(parse_hand_model_spec(doc)), ConfigError);
}

TEST(HandModelSpec, WrongActuatorCountIsRejected) {
  nlohmann::json doc = shipped_spec_json();
  doc["actuators"].erase(doc["actuators"].size() - 1);
  EXPECT_THROW(HandModel(parse_hand_model_spec(doc)), ConfigError);
}

TEST(HandModelSpec, StaleRestSkeletonIsRejected) {
  nlohmann::json doc = shipped_spec_json();
  doc["rest_skeleton"][7][0] = doc["rest_skeleton"][7][0].get<double>() + 0.001;
  EXPECT_THROW(HandModel(parse_hand_model_spec(doc)), ConfigError);
}
