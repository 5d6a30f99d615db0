#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "handretarget/demo.hpp"

using namespace handretarget;
using namespace handretarget::testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "handretarget_test_demo";
  fs::create_directories(dir);
  return dir / name;
}

std::size_t count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

FrameRecord still_frame() {
  FrameRecord f;
  f.scene = cube_scene();
  f.palm_center = Vec3(0.0, 0.0, 0.1);
  for (auto& e : f.contacts.entries) {
    e.raw = 0.2;
    e.missing = true;
    e.distance = 0.08;
  }
  return f;
}

}  // namespace

TEST(ExtractState, LengthIs57) { EXPECT_EQ(kStateDim, 57u); }

TEST(ExtractState, StationaryGivesZeroVelocities) {
  FrameRecord a = still_frame();
  a.actuators[kGlobalDofs + 4] = 0.3;
  const StateVector s = extract_state(a, &a, 1.0 / 60.0);
  EXPECT_EQ(s.rel_vel(), Vec3::Zero());
  for (std::size_t j = 0; j < kJointActuators; ++j) EXPECT_EQ(s.joint_vel(j), 0.0);
  EXPECT_EQ(s.joint_angle(4), 0.3);
}

TEST(ExtractState, HandMovingSixCentimetresPerFrame) {
  const FrameRecord a = still_frame();
  FrameRecord b = a;
  b.palm_center.x() += 0.06;
  const StateVector s = extract_state(b, &a, 1.0 / 60.0);
  EXPECT_NEAR(s.rel_vel().x(), 3.6, 1e-12);
  EXPECT_EQ(s.rel_vel().y(), 0.0);
  EXPECT_LT((s.rel_pos() - (b.palm_center - b.scene.center())).norm(), 1e-15);
}

TEST(ExtractState, FirstFrameHasZeroVelocityAndClampedContacts) {
  FrameRecord a = still_frame();
  a.contacts.entries[2].raw = 0.013;
  const StateVector s = extract_state(a, nullptr, 1.0 / 60.0);
  EXPECT_EQ(s.rel_vel(), Vec3::Zero());
  EXPECT_EQ(s.contact(0), 0.08);
  EXPECT_EQ(s.contact(1), 0.013);
  EXPECT_THROW(extract_state(a, nullptr, 0.0), ConfigError);
}

TEST(BuildDemo, IntegratedJointVelocitiesReconstructAngles) {
  for (const RecordedTrajectory& t : clean_ik_records()) {
    const DemoTrajectory d = build_demo(t);
    ASSERT_EQ(d.frames.size(), t.frames.size());
    std::array<double, kJointActuators> q{};
    for (std::size_t j = 0; j < kJointActuators; ++j) q[j] = d.frames[0].state.joint_angle(j);
    for (std::size_t i = 1; i < d.frames.size(); ++i) {
      for (std::size_t j = 0; j < kJointActuators; ++j) {
        q[j] += d.frames[i].state.joint_vel(j) * t.dt;
        EXPECT_NEAR(q[j], d.frames[i].state.joint_angle(j), 1e-9);
      }
      EXPECT_GT(d.frames[i].timestamp, d.frames[i - 1].timestamp);
    }
  }
}

TEST(ExportDemos, RoundTripIsBitExact) {
  std::vector<RecordedTrajectory> ok;
  for (const auto& t : clean_ik_records()) {
    if (is_success(t.frames)) ok.push_back(t);
  }
  ASSERT_FALSE(ok.empty());
  const fs::path p = scratch("roundtrip.jsonl");
  export_demos(ok, p.string(), {{"model", "x"}});
  const DemoDataset ds = import_demos(p.string());
  ASSERT_EQ(ds.trajectories.size(), ok.size());
  EXPECT_EQ(ds.header.at("model"), "x");
  for (std::size_t i = 0; i < ok.size(); ++i) {
    const DemoTrajectory expected = build_demo(ok[i]);
    EXPECT_EQ(ds.trajectories[i].id, expected.id);
    ASSERT_EQ(ds.trajectories[i].frames.size(), expected.frames.size());
    for (std::size_t k = 0; k < expected.frames.size(); ++k) EXPECT_TRUE(ds.trajectories[i].frames[k] == expected.frames[k]);
  }
}

TEST(ExportDemos, LineCountIsFramesPlusHeader) {
  std::vector<RecordedTrajectory> ok;
  std::size_t frames = 0;
  for (const auto& t : clean_ik_records()) {
    if (!is_success(t.frames)) continue;
    ok.push_back(t);
    frames += t.frames.size();
  }
  EXPECT_EQ(ok.size(), 10u);
  const fs::path p = scratch("count.jsonl");
  export_demos(ok, p.string());
  EXPECT_EQ(count_lines(p), frames + 1);
}

TEST(ExportDemos, EmptyListIsHeaderOnly) {
  const fs::path p = scratch("empty.jsonl");
  export_demos({}, p.string());
  EXPECT_EQ(count_lines(p), 1u);
  EXPECT_TRUE(import_demos(p.string()).trajectories.empty());
}

TEST(ExportDemos, RejectsFailedTrajectory) {
  RecordedTrajectory failed;
  failed.id = "still";
  failed.frames.assign(5, still_frame());
  EXPECT_THROW(export_demos(std::vector<RecordedTrajectory>{failed}, scratch("bad.jsonl").string()), ValidationError);
}

TEST(ExportDemos, UnwritablePathThrows) {
  EXPECT_THROW(export_demos({}, "/nonexistent-dir/x/demos.jsonl"), IoError);
}

TEST(ImportDemos, RejectsWrongLengths) {
  const fs::path p = scratch("short.jsonl");
  {
    std::ofstream out(p);
    out << R"({"format":"handretarget.demos","version":1})" << '\n';
    out << R"({"traj_id":"a","t":0,"state":[1,2],"action":[]})" << '\n';
  }
  EXPECT_THROW(import_demos(p.string()), ValidationError);
  EXPECT_THROW(import_demos(scratch("missing.jsonl").string()), IoError);
}
