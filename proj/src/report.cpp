#include "handretarget/report.hpp"

#include <map>
#include <sstream>

namespace handretarget {

using nlohmann::json;

ConfigKey config_key(const RunConfig& c) {
  ConfigKey k;
  k.mode = to_string(c.mode);
  if (c.mode != RetargetMode::Ik) {
    k.omega_task = c.weights.task;
    k.swarm = c.swarm.swarm_size;
    k.iterations = c.swarm.iterations;
  }
  return k;
}

json to_json(const ConfigKey& k) {
  return {{"mode", k.mode},
          {"omega_task", k.omega_task ? json(*k.omega_task) : json(nullptr)},
          {"swarm", k.swarm ? json(*k.swarm) : json(nullptr)},
          {"iterations", k.iterations ? json(*k.iterations) : json(nullptr)}};
}

ConfigKey config_key_from_json(const json& j) {
  ConfigKey k;
  k.mode = j.at("mode").get<std::string>();
  if (!j.at("omega_task").is_null()) k.omega_task = j["omega_task"].get<double>();
  if (!j.at("swarm").is_null()) k.swarm = j["swarm"].get<int>();
  if (!j.at("iterations").is_null()) k.iterations = j["iterations"].get<int>();
  return k;
}

json metrics_document(const ConfigKey& key, const std::vector<RecordedTrajectory>& trajectories,
                      const LiftingThresholds& t) {
  json per = json::array();
  std::size_t successes = 0;
  double ratio_sum = 0.0;
  for (const RecordedTrajectory& rec : trajectories) {
    const TrajectoryMetrics m = evaluate_trajectory(rec.frames, t);
    json j = to_json(m);
    j["id"] = rec.id;
    j["frames"] = rec.frames.size();
    per.push_back(std::move(j));
    successes += m.success ? 1 : 0;
    ratio_sum += m.lifting_ratio;
  }
  const double n = static_cast<double>(trajectories.size());
  return {{"format", "handretarget.metrics"},
          {"version", 1},
          {"config", to_json(key)},
          {"trajectories", per},
          {"aggregate",
           {{"count", trajectories.size()},
            {"successes", successes},
            {"success_rate", trajectories.empty() ? 0.0 : successes / n},
            {"mean_lifting_ratio", trajectories.empty() ? 0.0 : ratio_sum / n}}}};
}

namespace {

std::string csv_field(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream os;
  os.precision(6);
  os << *v;
  return os.str();
}

std::string csv_field(const std::optional<int>& v) { return v ? std::to_string(*v) : ""; }

std::string csv_real(double v) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << v;
  return os.str();
}

}  // namespace

Report make_report(const std::vector<json>& docs) {
  if (docs.empty()) throw ValidationError("report: at least one metrics file is required");
  struct Group {
    std::size_t count = 0;
    std::size_t successes = 0;
    double ratio_sum = 0.0;
    std::size_t files = 0;
  };
  std::map<ConfigKey, Group> groups;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const json& d = docs[i];
    const std::string where = "metrics document " + std::to_string(i);
    try {
      if (d.at("format").get<std::string>() != "handretarget.metrics") throw ValidationError(where + ": wrong format");
      if (d.at("version").get<int>() != 1) throw ValidationError(where + ": unsupported version");
      Group& g = groups[config_key_from_json(d.at("config"))];
      ++g.files;
      for (const json& t : d.at("trajectories")) {
        ++g.count;
        g.successes += t.at("success").get<bool>() ? 1 : 0;
        g.ratio_sum += t.at("lifting_ratio").get<double>();
      }
    } catch (const json::exception& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }

  Report r;
  r.aggregate = {{"format", "handretarget.report"}, {"version", 1}, {"configs", json::array()}};
  r.csv = "mode,omega_task,swarm,iterations,success_rate,lifting_ratio\n";
  for (const auto& [key, g] : groups) {
    const double n = static_cast<double>(g.count);
    const double rate = g.count ? g.successes / n : 0.0;
    const double ratio = g.count ? g.ratio_sum / n : 0.0;
    json entry = to_json(key);
    entry["files"] = g.files;
    entry["trajectories"] = g.count;
    entry["successes"] = g.successes;
    entry["success_rate"] = rate;
    entry["lifting_ratio"] = ratio;
    r.aggregate["configs"].push_back(std::move(entry));
    r.csv += key.mode + "," + csv_field(key.omega_task) + "," + csv_field(key.swarm) + "," +
             csv_field(key.iterations) + "," + csv_real(rate) + "," + csv_real(ratio) + "\n";
  }
  return r;
}

}  // namespace handretarget
