#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "handretarget/config.hpp"
#include "handretarget/evaluator.hpp"

namespace handretarget {

/// Identifies one experimental configuration in reports. Fields that do not
/// apply to the mode (swarm settings for plain IK) are empty.
struct ConfigKey {
  std::string mode;
  std::optional<double> omega_task;
  std::optional<int> swarm;
  std::optional<int> iterations;

  auto operator<=>(const ConfigKey&) const = default;
};

ConfigKey config_key(const RunConfig& c);
nlohmann::json to_json(const ConfigKey& k);
ConfigKey config_key_from_json(const nlohmann::json& j);

/// Per-trajectory metrics plus the aggregate for one configuration.
nlohmann::json metrics_document(const ConfigKey& key, const std::vector<RecordedTrajectory>& trajectories,
                                const LiftingThresholds& t = {});

struct Report {
  nlohmann::json aggregate;
  std::string csv;
};

/// Groups metrics documents by configuration (sorted by key) and reports the
/// success rate and mean lifting ratio of each group. Throws ValidationError
/// on malformed documents.
Report make_report(const std::vector<nlohmann::json>& metrics_docs);

}  // namespace handretarget
