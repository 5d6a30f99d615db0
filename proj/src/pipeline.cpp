#include "handretarget/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <random>
#include <thread>

namespace handretarget {

RetargetSettings RetargetSettings::from(const RunConfig& c) {
  RetargetSettings s;
  s.mode = c.mode;
  s.weights = c.weights;
  s.swarm = c.swarm;
  s.ik = c.ik;
  s.rate = c.rate;
  s.refine_multiple = c.refine_multiple;
  return s;
}

std::uint64_t trajectory_seed(std::uint64_t run_seed, const std::string& trajectory_id) {
  const std::uint64_t h = fnv1a64(trajectory_id);
  std::seed_seq seq{static_cast<std::uint32_t>(run_seed), static_cast<std::uint32_t>(run_seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

namespace {

[[noreturn]] void rethrow_with_frame(const Error& e, std::size_t k, const std::string& id) {
  const std::string msg = "trajectory '" + id + "' frame " + std::to_string(k) + ": " + e.what();
  const std::string kind = e.kind();
  if (kind == "degenerate_input") throw DegenerateInput(msg);
  if (kind == "config_error") throw ConfigError(msg);
  if (kind == "validation_error") throw ValidationError(msg);
  throw Error(msg);
}

}  // namespace

RecordedTrajectory run_retarget(const InputTrajectory& input, const HandModel& model, const SceneState& scene,
                                const RetargetSettings& settings) {
  if (!(settings.rate > 0.0)) throw ConfigError("rate must be > 0");
  if (settings.refine_multiple < 1) throw ConfigError("refine_multiple must be >= 1");
  const EnergyWeights weights = settings.weights.normalized();
  weights.validate();

  RecordedTrajectory rec;
  rec.id = input.id;
  rec.dt = 1.0 / settings.rate;
  rec.frames.reserve(input.frames.size());

  Rng rng(trajectory_seed(settings.swarm.rng_seed, input.id));
  SceneState current = scene;
  std::optional<ActuatorVector> prev;

  for (std::size_t k = 0; k < input.frames.size(); ++k) {
    const InputFrame& in = input.frames[k];
    try {
      ActuatorVector a;
      if (settings.mode == RetargetMode::Ik) {
        const PoseTarget target(in.joints, model.bone_lengths());
        a = ik_retarget(target.scaled(), model, prev, settings.ik);
      } else {
        a = hybrid_pso(in.joints, current, model, weights, settings.swarm, settings.ik, prev, rec.dt, rng).action;
      }

      HandPose pose;
      if (settings.mode == RetargetMode::HybridRefine) {
        const double sub_dt = rec.dt / settings.refine_multiple;
        for (int r = 0; r < settings.refine_multiple; ++r) {
          a = task_refine(current, a, model, weights, settings.swarm, sub_dt, rng).action;
          pose = model.forward(a);
          current = step_scene(current, contact_points(pose), sub_dt);
        }
      } else {
        pose = model.forward(a);
        current = step_scene(current, contact_points(pose), rec.dt);
      }

      FrameRecord fr;
      fr.timestamp = in.timestamp;
      fr.source = in.joints;
      fr.actuators = a;
      fr.simulated = pose.skeleton;
      fr.palm_center = pose.palm_center;
      fr.contacts = contact_distances(contact_points(pose), current, weights.d_max, weights.omega_cost);
      fr.scene = current;
      rec.frames.push_back(std::move(fr));
      prev = a;
    } catch (const Error& e) {
      rethrow_with_frame(e, k, input.id);
    }
  }
  return rec;
}

std::vector<RecordedTrajectory> run_batch(const std::vector<InputTrajectory>& inputs, const HandModel& model,
                                          const SceneState& scene, const RetargetSettings& settings,
                                          unsigned threads) {
  std::vector<RecordedTrajectory> out(inputs.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, inputs.size())));
  if (threads <= 1) {
    for (std::size_t i = 0; i < inputs.size(); ++i) out[i] = run_retarget(inputs[i], model, scene, settings);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(inputs.size());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < inputs.size(); i = next++) {
        try {
          out[i] = run_retarget(inputs[i], model, scene, settings);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace handretarget
