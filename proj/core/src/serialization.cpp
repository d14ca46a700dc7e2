#include "mime/serialization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mime {

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const json& require_object(const json& node, const std::string& path) {
  if (!node.is_object()) throw ConfigError(path + ": expected an object");
  return node;
}

}  // namespace

void require_keys(const json& node, const std::string& path, std::initializer_list<const char*> allowed) {
  require_object(node, path);
  for (const auto& [key, value] : node.items()) {
    const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
    if (!ok) throw ConfigError(join(path, key) + ": unknown key");
  }
}

double read_number(const json& node, const std::string& key, const std::string& path, double fallback) {
  if (!node.contains(key)) return fallback;
  return read_number(node, key, path);
}

double read_number(const json& node, const std::string& key, const std::string& path) {
  const std::string where = join(path, key);
  if (!node.contains(key)) throw ConfigError(where + ": required key is missing");
  const json& v = node.at(key);
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where + ": expected a finite number");
  return d;
}

std::int64_t read_integer(const json& node, const std::string& key, const std::string& path,
                          std::int64_t fallback, std::int64_t min_value) {
  const std::string where = join(path, key);
  if (!node.contains(key)) return fallback;
  const json& v = node.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
  const auto i = v.get<std::int64_t>();
  if (i < min_value) throw ConfigError(where + ": must be >= " + std::to_string(min_value));
  return i;
}

bool read_bool(const json& node, const std::string& key, const std::string& path, bool fallback) {
  if (!node.contains(key)) return fallback;
  const json& v = node.at(key);
  if (!v.is_boolean()) throw ConfigError(join(path, key) + ": expected true or false");
  return v.get<bool>();
}

std::string read_string(const json& node, const std::string& key, const std::string& path,
                        const std::string& fallback) {
  if (!node.contains(key)) return fallback;
  const json& v = node.at(key);
  if (!v.is_string()) throw ConfigError(join(path, key) + ": expected a string");
  return v.get<std::string>();
}

// ---------------------------------------------------------------------------

json to_json_value(const ClassDistribution& dist) {
  if (const auto* g = std::get_if<GaussianComponent>(&dist)) {
    return json{{"mean", g->mean()}, {"std", g->stddev()}};
  }
  const auto& t = std::get<TabulatedDistribution>(dist);
  json pts = json::array();
  for (const auto& [x, p] : t.points()) pts.push_back(json::array({x, p}));
  return json{{"tabulated", pts}};
}

json to_json_value(const GroupModel& model) {
  return json{{"class1", to_json_value(model.class1())},
              {"class2", to_json_value(model.class2())},
              {"prior", model.prior()}};
}

json to_json_value(const PopulationModel& pop) {
  return json{{"major", to_json_value(pop.major)}, {"minor", to_json_value(pop.minor)}};
}

json to_json_value(const TrainingSchedule& s) {
  return json{{"epochs", s.epochs}, {"minibatch_size", s.minibatch_size}, {"shuffle", s.shuffle}};
}

json to_json_value(const DisplacementSpec& spec) {
  return json{{"delta_cap", spec.delta_cap}, {"side", std::string(to_string(spec.side))}};
}

json to_json_value(const HardMiningConfig& hm) {
  return json{{"batch_size", hm.batch_size}, {"keep_per_class", hm.keep_per_class}};
}

json to_json_value(const TheoremVerdict& v) {
  json q = json::object();
  for (const auto& [name, value] : v.quantities) q[name] = value;
  json out{{"theorem", std::string(to_string(v.theorem))}, {"holds", v.holds}};
  out["case"] = v.theorem_case ? json(std::string(to_string(*v.theorem_case))) : json(nullptr);
  out["quantities"] = std::move(q);
  return out;
}

json to_json_value(const HyperplaneErrorEstimate& e) {
  return json{{"mean_abs_error", e.mean_abs_error},
              {"mean_d", e.mean_d},
              {"std_error", e.std_error},
              {"trials", e.trials},
              {"resamples", e.resamples}};
}

json to_json_value(const PairedHyperplaneComparison& c) {
  return json{{"major", to_json_value(c.major)},
              {"minor", to_json_value(c.minor)},
              {"mean_difference", c.mean_difference},
              {"std_error", c.std_error},
              {"z_score", c.z_score}};
}

json to_json_value(const MimeMetrics& m) {
  return json{{"group", std::string(to_string(m.group))},
              {"mime_trial_count", m.mime_trial_count},
              {"total_trials", m.total_trials},
              {"avg_gain", m.avg_gain}};
}

json to_json_value(const Chi2Report& r) {
  return json{{"statistic", r.statistic},
              {"dof", r.dof},
              {"critical_value", r.critical_value},
              {"reject_gaussian", r.reject_gaussian},
              {"bins", r.bins},
              {"sample_mean", r.sample_mean},
              {"sample_std", r.sample_std},
              {"sample_count", r.sample_count},
              {"observed", r.observed},
              {"expected", r.expected},
              {"low_count_warning", r.low_count_warning}};
}

json to_json_value(const ProjectedHistogram& h) {
  return json{{"bin_edges", h.bin_edges}, {"masses", h.masses}, {"sample_count", h.sample_count}};
}

// ---------------------------------------------------------------------------

ClassDistribution class_distribution_from_json(const json& node, const std::string& path) {
  require_object(node, path);
  if (node.contains("tabulated")) {
    require_keys(node, path, {"tabulated"});
    const json& arr = node.at("tabulated");
    const std::string where = join(path, "tabulated");
    if (!arr.is_array()) throw ConfigError(where + ": expected an array of [x, density] pairs");
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const json& p = arr[i];
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw ConfigError(where + "[" + std::to_string(i) + "]: expected [x, density]");
      }
      pts.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    try {
      return TabulatedDistribution(std::move(pts));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  require_keys(node, path, {"mean", "std"});
  const double m = read_number(node, "mean", path);
  const double s = read_number(node, "std", path);
  try {
    return GaussianComponent(m, s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(join(path, "std") + ": " + e.what());
  }
}

GroupModel group_model_from_json(const json& node, const std::string& path) {
  require_keys(node, path, {"class1", "class2", "prior"});
  if (!node.contains("class1")) throw ConfigError(join(path, "class1") + ": required key is missing");
  if (!node.contains("class2")) throw ConfigError(join(path, "class2") + ": required key is missing");
  auto c1 = class_distribution_from_json(node.at("class1"), join(path, "class1"));
  auto c2 = class_distribution_from_json(node.at("class2"), join(path, "class2"));
  const double prior = read_number(node, "prior", path, 0.5);
  try {
    return GroupModel(std::move(c1), std::move(c2), prior);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

PopulationModel population_from_json(const json& node, const std::string& path) {
  require_keys(node, path, {"major", "minor"});
  if (!node.contains("major")) throw ConfigError(join(path, "major") + ": required key is missing");
  if (!node.contains("minor")) throw ConfigError(join(path, "minor") + ": required key is missing");
  return PopulationModel{group_model_from_json(node.at("major"), join(path, "major")),
                         group_model_from_json(node.at("minor"), join(path, "minor"))};
}

TrainingSchedule schedule_from_json(const json& node, const std::string& path,
                                    const TrainingSchedule& defaults) {
  require_object(node, path);
  TrainingSchedule s;
  s.epochs = static_cast<int>(read_integer(node, "epochs", path, defaults.epochs, 1));
  s.minibatch_size = static_cast<int>(read_integer(node, "minibatch_size", path, defaults.minibatch_size, 1));
  s.shuffle = read_bool(node, "shuffle", path, defaults.shuffle);
  return s;
}

DisplacementSpec displacement_from_json(const json& node, const std::string& path) {
  require_keys(node, path, {"delta_cap", "side"});
  DisplacementSpec spec;
  spec.delta_cap = read_number(node, "delta_cap", path, spec.delta_cap);
  if (!(spec.delta_cap > 0.0)) throw ConfigError(join(path, "delta_cap") + ": must be positive");
  try {
    spec.side = side_from_string(read_string(node, "side", path, std::string(to_string(spec.side))));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(join(path, "side") + ": " + e.what());
  }
  return spec;
}

HardMiningConfig hard_mining_from_json(const json& node, const std::string& path) {
  require_keys(node, path, {"batch_size", "keep_per_class"});
  HardMiningConfig hm;
  hm.batch_size = static_cast<int>(read_integer(node, "batch_size", path, hm.batch_size, 1));
  hm.keep_per_class = static_cast<int>(read_integer(node, "keep_per_class", path, hm.keep_per_class, 1));
  return hm;
}

}  // namespace mime
