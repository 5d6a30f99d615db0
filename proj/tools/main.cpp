#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "handretarget/config.hpp"
#include "handretarget/demo.hpp"
#include "handretarget/pipeline.hpp"
#include "handretarget/report.hpp"
#include "handretarget/synth.hpp"
#include "handretarget/trajectory_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace handretarget;

namespace {

/// Expands directories into their *.jsonl files; result sorted by path.
std::vector<std::string> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<std::string> out;
  for (const std::string& in : inputs) {
    if (fs::is_directory(in)) {
      for (const auto& e : fs::directory_iterator(in))
        if (e.is_regular_file() && e.path().extension() == ".jsonl") out.push_back(e.path().string());
    } else if (fs::exists(in)) {
      out.push_back(in);
    } else {
      throw IoError("no such file or directory: " + in);
    }
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw ValidationError("no input files");
  return out;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

struct SynthArgs {
  std::size_t n = 10;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::string scene;
  std::string spec;
  std::string out;
  double rate = 60.0;
  bool clean = false;
};

int cmd_synth(const SynthArgs& a) {
  const HandModel model = HandModel::load(a.spec);
  const SceneState scene = load_scene(a.scene);
  SynthOptions opt;
  opt.count = a.n;
  opt.sigma = a.sigma;
  opt.seed = a.seed;
  opt.rate = a.rate;
  ensure_dir(a.out);
  json manifest = {{"count", a.n}, {"sigma", a.sigma}, {"seed", a.seed}, {"rate", a.rate},
                   {"domain_scale", opt.domain_scale}, {"files", json::array()}};
  for (const SynthTrajectory& t : synth_generate_detailed(scene, model, opt)) {
    const std::string path = (fs::path(a.out) / (t.noisy.id + ".jsonl")).string();
    save_input_trajectory(a.clean ? t.clean : t.noisy, path);
    manifest["files"].push_back(t.noisy.id + ".jsonl");
  }
  write_text((fs::path(a.out) / "manifest.json").string(), manifest.dump(2) + "\n");
  std::cout << json{{"written", a.n}, {"out", a.out}}.dump() << "\n";
  return 0;
}

struct RetargetArgs {
  std::string config;
  std::string mode;
  std::vector<std::string> inputs;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> swarm;
  std::optional<int> iterations;
  std::optional<double> omega_task;
  unsigned threads = 0;
};

int cmd_retarget(const RetargetArgs& a) {
  RunConfig cfg = load_run_config(a.config);
  if (!a.mode.empty()) cfg.mode = parse_mode(a.mode);
  if (a.seed) cfg.swarm.rng_seed = *a.seed;
  if (a.swarm) cfg.swarm.swarm_size = *a.swarm;
  if (a.iterations) cfg.swarm.iterations = *a.iterations;
  if (a.omega_task) {
    cfg.weights.task = *a.omega_task;
    cfg.weights.pose = 1.0 - *a.omega_task;
  }
  cfg.weights = cfg.weights.normalized();
  cfg.validate();
  const std::string out_dir = a.out.empty() ? cfg.output_dir : a.out;

  const HandModel model = HandModel::load(cfg.hand_spec);
  const SceneState scene = load_scene(cfg.scene);
  std::vector<InputTrajectory> inputs;
  for (const std::string& p : expand_inputs(a.inputs)) {
    if (fs::path(p).filename() == "manifest.json") continue;
    inputs.push_back(load_input_trajectory(p));
  }

  const auto records = run_batch(inputs, model, scene, RetargetSettings::from(cfg), a.threads);
  ensure_dir(out_dir);
  json meta = {{"config_key", to_json(config_key(cfg))},
               {"config", to_json(cfg)},
               {"model_fingerprint", model.fingerprint()}};
  for (const RecordedTrajectory& r : records) {
    save_records(r, (fs::path(out_dir) / (r.id + ".records.jsonl")).string(), meta);
  }
  std::cout << json{{"trajectories", records.size()}, {"out", out_dir}}.dump() << "\n";
  return 0;
}

struct EvalArgs {
  std::vector<std::string> records;
  std::string out;
  std::string demos;
};

int cmd_eval(const EvalArgs& a) {
  std::vector<RecordedTrajectory> trajs;
  std::optional<json> key_json;
  json header_info = json::object();
  for (const std::string& p : expand_inputs(a.records)) {
    LoadedRecords lr = load_records(p);
    const json k = lr.metadata.value("config_key", json(nullptr));
    if (k.is_null()) throw ValidationError(p + ": records carry no configuration");
    if (key_json && *key_json != k) throw ValidationError(p + ": records from different configurations");
    key_json = k;
    header_info["model_fingerprint"] = lr.metadata.value("model_fingerprint", json(nullptr));
    header_info["config"] = lr.metadata.value("config", json(nullptr));
    trajs.push_back(std::move(lr.trajectory));
  }
  const ConfigKey key = config_key_from_json(*key_json);
  const json doc = metrics_document(key, trajs);
  write_text(a.out, doc.dump(2) + "\n");

  if (!a.demos.empty()) {
    std::vector<RecordedTrajectory> successes;
    for (RecordedTrajectory& t : trajs)
      if (is_success(t.frames)) successes.push_back(std::move(t));
    export_demos(successes, a.demos, header_info);
  }
  std::cout << doc["aggregate"].dump() << "\n";
  return 0;
}

struct ReportArgs {
  std::vector<std::string> metrics;
  std::string csv;
  std::string out;
};

int cmd_report(const ReportArgs& a) {
  std::vector<json> docs;
  for (const std::string& p : a.metrics) docs.push_back(read_json(p));
  const Report r = make_report(docs);
  if (!a.csv.empty()) write_text(a.csv, r.csv);
  if (!a.out.empty()) write_text(a.out, r.aggregate.dump(2) + "\n");
  std::cout << r.aggregate.dump(2) << "\n";
  return 0;
}

int cmd_rest_pose(const std::string& spec_path, bool write) {
  HandModelSpec spec = load_hand_model_spec(spec_path);
  spec.rest_skeleton.reset();
  const HandModel model(spec);
  const Skeleton rest = model.forward(ActuatorVector::Zero()).skeleton;
  if (write) {
    json doc = read_json(spec_path);
    doc["rest_skeleton"] = skeleton_to_json(rest);
    write_text(spec_path, doc.dump(2) + "\n");
  }
  std::cout << skeleton_to_json(rest).dump() << "\n";
  return 0;
}

int report_error(const std::string& type, const std::string& message, int code) {
  std::cerr << json{{"error", {{"type", type}, {"message", message}}}}.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hand motion retargeting with task-aware swarm refinement"};
  app.require_subcommand(1);

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Generate synthetic noisy grasp trajectories");
  synth->add_option("--n", sa.n, "Number of trajectories")->capture_default_str();
  synth->add_option("--sigma", sa.sigma, "Noise standard deviation per coordinate (m)")->capture_default_str();
  synth->add_option("--seed", sa.seed, "Random seed")->capture_default_str();
  synth->add_option("--scene", sa.scene, "Scene file")->required();
  synth->add_option("--spec", sa.spec, "Hand model spec file")->required();
  synth->add_option("--out", sa.out, "Output directory")->required();
  synth->add_option("--rate", sa.rate, "Frame rate (fps)")->capture_default_str();
  synth->add_flag("--clean", sa.clean, "Write the noise-free streams");

  RetargetArgs ra;
  auto* retarget = app.add_subcommand("retarget", "Retarget input trajectories onto the hand model");
  retarget->add_option("--config", ra.config, "Run config file")->required();
  retarget->add_option("--mode", ra.mode, "ik, hybrid or hybrid+refine (overrides the config)");
  retarget->add_option("--input", ra.inputs, "Input trajectory files or directories")->required();
  retarget->add_option("--out", ra.out, "Output directory for records");
  retarget->add_option("--seed", ra.seed, "Swarm seed (overrides the config)");
  retarget->add_option("--swarm", ra.swarm, "Swarm size (overrides the config)");
  retarget->add_option("--iterations", ra.iterations, "Swarm iterations (overrides the config)");
  retarget->add_option("--omega-task", ra.omega_task, "Task weight; pose weight becomes 1 - value");
  retarget->add_option("--threads", ra.threads, "Worker threads (0 = hardware concurrency)");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Evaluate recorded trajectories");
  eval->add_option("--records", ea.records, "Record files or directories")->required();
  eval->add_option("--out", ea.out, "Metrics JSON output")->required();
  eval->add_option("--demos", ea.demos, "Export successful trajectories as a demonstration dataset");

  ReportArgs rpa;
  auto* report = app.add_subcommand("report", "Aggregate metrics files");
  report->add_option("--metrics", rpa.metrics, "Metrics files")->required();
  report->add_option("--csv", rpa.csv, "CSV output");
  report->add_option("--out", rpa.out, "Aggregate JSON output");

  std::string rest_spec;
  bool rest_write = false;
  auto* rest = app.add_subcommand("rest-pose", "Print the rest skeleton of a hand model spec");
  rest->add_option("--spec", rest_spec, "Hand model spec file")->required();
  rest->add_flag("--write", rest_write, "Store the rest skeleton in the hand model file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage_error", e.what(), 64);
  }

  try {
    if (*synth) return cmd_synth(sa);
    if (*retarget) return cmd_retarget(ra);
    if (*eval) return cmd_eval(ea);
    if (*report) return cmd_report(rpa);
    if (*rest) return cmd_rest_pose(rest_spec, rest_write);
  } catch (const Error& e) {
    return report_error(e.kind(), e.what(), 2);
  } catch (const std::exception& e) {
    return report_error("internal_error", e.what(), 1);
  }
  return 0;
}
