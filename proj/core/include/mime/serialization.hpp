#pragma once

// JSON mapping for configs and results. Parsers take the dotted path of the
// node they read so schema errors name the offending key.

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "mime/distributions.hpp"
#include "mime/experiment.hpp"
#include "mime/feature_analysis.hpp"
#include "mime/perceptron.hpp"
#include "mime/theory.hpp"

namespace mime {

using json = nlohmann::ordered_json;

/// Raised for malformed config content; what() starts with the key path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejects keys outside `allowed` in an object node.
void require_keys(const json& node, const std::string& path, std::initializer_list<const char*> allowed);

json to_json_value(const ClassDistribution& dist);
json to_json_value(const GroupModel& model);
json to_json_value(const PopulationModel& pop);
json to_json_value(const TrainingSchedule& schedule);
json to_json_value(const DisplacementSpec& spec);
json to_json_value(const HardMiningConfig& hm);
json to_json_value(const TheoremVerdict& verdict);
json to_json_value(const HyperplaneErrorEstimate& est);
json to_json_value(const PairedHyperplaneComparison& cmp);
json to_json_value(const MimeMetrics& m);
json to_json_value(const Chi2Report& r);
json to_json_value(const ProjectedHistogram& h);

ClassDistribution class_distribution_from_json(const json& node, const std::string& path);
GroupModel group_model_from_json(const json& node, const std::string& path);
PopulationModel population_from_json(const json& node, const std::string& path);
TrainingSchedule schedule_from_json(const json& node, const std::string& path,
                                    const TrainingSchedule& defaults = {});
DisplacementSpec displacement_from_json(const json& node, const std::string& path);
HardMiningConfig hard_mining_from_json(const json& node, const std::string& path);

// Typed field readers; absent keys fall back to `fallback`.
double read_number(const json& node, const std::string& key, const std::string& path, double fallback);
double read_number(const json& node, const std::string& key, const std::string& path);
std::int64_t read_integer(const json& node, const std::string& key, const std::string& path,
                          std::int64_t fallback, std::int64_t min_value);
bool read_bool(const json& node, const std::string& key, const std::string& path, bool fallback);
std::string read_string(const json& node, const std::string& key, const std::string& path,
                        const std::string& fallback);

}  // namespace mime
