#pragma once

// Command-line front end: invocation parsing, config schema, dispatch and
// report writing.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mime/experiment.hpp"
#include "mime/serialization.hpp"
#include "mime/theory.hpp"

namespace mime::cli {

enum class Format { csv, json };

struct CommandSpec {
  std::string command;
  std::filesystem::path config_path;
  std::filesystem::path out_dir = ".";
  std::map<std::string, std::string> overrides;  // dotted key -> JSON text
  Format format = Format::csv;
  std::optional<unsigned> jobs;
};

/// Bad command line; maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help was given; what() holds the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"sweep",           "verify",  "expected-update",
                                              "mc-hyperplane",   "analyze-features", "chi2"};
  return names;
}

/// argv[0] is the program name. Throws UsageError or HelpRequested.
CommandSpec parse_invocation(const std::vector<std::string>& argv);

struct ExpectedUpdateGrid {
  double span = 0.5;  // offsets from the majority ideal threshold
  int points = 21;
};

struct McSection {
  int K = 51;
  std::size_t trials = 20000;
  double learning_rate = 0.01;
  TrainingSchedule schedule{1, 1, false};
  bool displaced_start = true;
};

struct AnalysisSection {
  std::string features;  // path, relative to the config file
  std::string weights;
  std::size_t bins = 40;
  double ref = 5.0;
  std::size_t chi2_bins = 15;
};

/// Whole config file. Sections absent from the file keep their defaults;
/// `population` is required by the commands that need it.
struct LabConfig {
  std::uint64_t seed = 0;
  std::optional<PopulationModel> population;
  TrainingSchedule schedule{10, 1, true};
  double learning_rate = 0.01;
  double initial_bias = 0.0;
  std::vector<double> beta_grid = default_beta_grid();
  std::size_t train_size = 200;
  std::size_t test_size_per_group = 1000;
  std::size_t trials = 10;
  std::optional<HardMiningConfig> hard_mining;
  DisplacementSpec displacement;
  McSection mc;
  ExpectedUpdateGrid expected_update;
  std::optional<AnalysisSection> analysis;
};

LabConfig config_from_json(const json& root);
json config_to_json(const LabConfig& cfg);

/// Reads the config, applies dotted overrides, then --seed / --trials.
LabConfig load_config(const CommandSpec& spec);

/// Applies `key=value` style overrides in place. Values are JSON text; a
/// value that is not valid JSON is taken as a string.
void apply_overrides(json& root, const std::map<std::string, std::string>& overrides);

SweepConfig to_sweep_config(const LabConfig& cfg, unsigned jobs);
HyperplaneMcConfig to_mc_config(const LabConfig& cfg, unsigned jobs);

/// Fixed-point text with 6 decimals; never prints "-0.000000".
std::string fixed6(double v);

/// Runs the command; returns 0 on success and 1 on runtime failure with a
/// message on `err`. Written file paths are appended to `written`.
int execute(const CommandSpec& spec, std::ostream& err, std::vector<std::filesystem::path>* written = nullptr);

/// Full program: parse, execute, map errors to exit statuses.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace mime::cli
