#include "mime/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <map>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mime/feature_analysis.hpp"

namespace mime::cli {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Invocation

CommandSpec parse_invocation(const std::vector<std::string>& argv) {
  CLI::App app{"Simulation lab for minority inclusion / majority enhancement", "mime-lab"};
  app.require_subcommand(1, 1);
  app.fallthrough(false);

  CommandSpec spec;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<unsigned> jobs;
  std::vector<std::string> sets;

  static const std::map<std::string, std::string> about{
      {"sweep", "Accuracy vs minority ratio over repeated trials"},
      {"verify", "Check the three theorem conditions for the configured population"},
      {"expected-update", "Exact and first-order expected bias update around the ideal threshold"},
      {"mc-hyperplane", "Paired Monte Carlo estimate of the learned threshold error"},
      {"analyze-features", "Histogram overlap and domain gap of projected features"},
      {"chi2", "Chi-square Gaussianity test per group and class"}};
  for (const auto& name : commands()) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--config", spec.config_path, "Config file (JSON)")->required();
    sub->add_option("--out", spec.out_dir, "Output directory");
    sub->add_option("--seed", seed, "Override the master seed");
    sub->add_option("--trials", trials, "Override sweep.trials and mc.trials");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--jobs", jobs, "Worker threads (default: hardware concurrency)");
    sub->add_option("--set", sets, "Config override, dotted.key=value (repeatable)");
  }

  std::vector<std::string> args(argv.size() > 1 ? argv.begin() + 1 : argv.end(), argv.end());
  std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  spec.command = app.get_subcommands().front()->get_name();
  spec.format = format == "json" ? Format::json : Format::csv;
  spec.jobs = jobs;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got '" + s + "'");
    spec.overrides[s.substr(0, eq)] = s.substr(eq + 1);
  }
  if (seed) spec.overrides["seed"] = std::to_string(*seed);
  if (trials) {
    if (*trials < 1) throw UsageError("--trials must be >= 1");
    spec.overrides["sweep.trials"] = std::to_string(*trials);
    spec.overrides["mc.trials"] = std::to_string(*trials);
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Config schema

namespace {

std::size_t read_count(const json& node, const char* key, const std::string& path, std::size_t fallback,
                       std::int64_t min_value) {
  return static_cast<std::size_t>(read_integer(node, key, path, static_cast<std::int64_t>(fallback), min_value));
}

const json& section(const json& root, const char* key) {
  static const json empty = json::object();
  return root.contains(key) ? root.at(key) : empty;
}

}  // namespace

LabConfig config_from_json(const json& root) {
  require_keys(root, "", {"seed", "population", "schedule", "sweep", "displacement", "mc", "expected_update",
                          "analysis"});
  LabConfig cfg;
  if (root.contains("seed")) {
    const json& s = root.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
      throw ConfigError("seed: expected a non-negative integer");
    }
    cfg.seed = s.get<std::uint64_t>();
  }
  if (root.contains("population")) cfg.population = population_from_json(root.at("population"), "population");

  const json& sch = section(root, "schedule");
  require_keys(sch, "schedule", {"epochs", "minibatch_size", "shuffle", "learning_rate", "initial_bias"});
  cfg.schedule = schedule_from_json(sch, "schedule", cfg.schedule);
  cfg.learning_rate = read_number(sch, "learning_rate", "schedule", cfg.learning_rate);
  if (cfg.learning_rate < 0.0) throw ConfigError("schedule.learning_rate: must be >= 0");
  cfg.initial_bias = read_number(sch, "initial_bias", "schedule", cfg.initial_bias);

  const json& sw = section(root, "sweep");
  require_keys(sw, "sweep", {"beta_grid", "train_size", "test_size_per_group", "trials", "hard_mining"});
  if (sw.contains("beta_grid")) {
    const json& g = sw.at("beta_grid");
    if (!g.is_array()) throw ConfigError("sweep.beta_grid: expected an array of numbers");
    cfg.beta_grid.clear();
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!g[i].is_number()) throw ConfigError("sweep.beta_grid[" + std::to_string(i) + "]: expected a number");
      cfg.beta_grid.push_back(g[i].get<double>());
    }
  }
  cfg.train_size = read_count(sw, "train_size", "sweep", cfg.train_size, 2);
  cfg.test_size_per_group = read_count(sw, "test_size_per_group", "sweep", cfg.test_size_per_group, 1);
  cfg.trials = read_count(sw, "trials", "sweep", cfg.trials, 1);
  if (sw.contains("hard_mining") && !sw.at("hard_mining").is_null()) {
    cfg.hard_mining = hard_mining_from_json(sw.at("hard_mining"), "sweep.hard_mining");
  }

  if (root.contains("displacement")) cfg.displacement = displacement_from_json(root.at("displacement"), "displacement");

  const json& mc = section(root, "mc");
  require_keys(mc, "mc", {"K", "trials", "learning_rate", "epochs", "minibatch_size", "shuffle", "displaced_start"});
  cfg.mc.K = static_cast<int>(read_integer(mc, "K", "mc", cfg.mc.K, 2));
  cfg.mc.trials = read_count(mc, "trials", "mc", cfg.mc.trials, 1);
  cfg.mc.learning_rate = read_number(mc, "learning_rate", "mc", cfg.mc.learning_rate);
  if (cfg.mc.learning_rate < 0.0) throw ConfigError("mc.learning_rate: must be >= 0");
  cfg.mc.schedule = schedule_from_json(mc, "mc", cfg.mc.schedule);
  cfg.mc.displaced_start = read_bool(mc, "displaced_start", "mc", cfg.mc.displaced_start);

  const json& eu = section(root, "expected_update");
  require_keys(eu, "expected_update", {"span", "points"});
  cfg.expected_update.span = read_number(eu, "span", "expected_update", cfg.expected_update.span);
  if (!(cfg.expected_update.span > 0.0)) throw ConfigError("expected_update.span: must be positive");
  cfg.expected_update.points =
      static_cast<int>(read_integer(eu, "points", "expected_update", cfg.expected_update.points, 2));

  if (root.contains("analysis")) {
    const json& an = root.at("analysis");
    require_keys(an, "analysis", {"features", "weights", "bins", "ref", "chi2_bins"});
    AnalysisSection a;
    a.features = read_string(an, "features", "analysis", "");
    a.weights = read_string(an, "weights", "analysis", "");
    if (a.features.empty()) throw ConfigError("analysis.features: required key is missing");
    if (a.weights.empty()) throw ConfigError("analysis.weights: required key is missing");
    a.bins = read_count(an, "bins", "analysis", a.bins, 7);
    a.ref = read_number(an, "ref", "analysis", a.ref);
    if (!(a.ref > 0.0)) throw ConfigError("analysis.ref: must be positive");
    a.chi2_bins = read_count(an, "chi2_bins", "analysis", a.chi2_bins, 4);
    cfg.analysis = a;
  }
  return cfg;
}

json config_to_json(const LabConfig& cfg) {
  json root;
  root["seed"] = cfg.seed;
  if (cfg.population) root["population"] = to_json_value(*cfg.population);
  json sch = to_json_value(cfg.schedule);
  sch["learning_rate"] = cfg.learning_rate;
  sch["initial_bias"] = cfg.initial_bias;
  root["schedule"] = sch;
  json sw{{"beta_grid", cfg.beta_grid},
          {"train_size", cfg.train_size},
          {"test_size_per_group", cfg.test_size_per_group},
          {"trials", cfg.trials}};
  sw["hard_mining"] = cfg.hard_mining ? to_json_value(*cfg.hard_mining) : json(nullptr);
  root["sweep"] = sw;
  root["displacement"] = to_json_value(cfg.displacement);
  root["mc"] = json{{"K", cfg.mc.K},
                    {"trials", cfg.mc.trials},
                    {"learning_rate", cfg.mc.learning_rate},
                    {"epochs", cfg.mc.schedule.epochs},
                    {"minibatch_size", cfg.mc.schedule.minibatch_size},
                    {"shuffle", cfg.mc.schedule.shuffle},
                    {"displaced_start", cfg.mc.displaced_start}};
  root["expected_update"] = json{{"span", cfg.expected_update.span}, {"points", cfg.expected_update.points}};
  if (cfg.analysis) {
    root["analysis"] = json{{"features", cfg.analysis->features},
                            {"weights", cfg.analysis->weights},
                            {"bins", cfg.analysis->bins},
                            {"ref", cfg.analysis->ref},
                            {"chi2_bins", cfg.analysis->chi2_bins}};
  }
  return root;
}

void apply_overrides(json& root, const std::map<std::string, std::string>& overrides) {
  for (const auto& [key, text] : overrides) {
    json* node = &root;
    std::size_t start = 0;
    for (;;) {
      const auto dot = key.find('.', start);
      const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
      if (part.empty()) throw ConfigError(key + ": malformed override key");
      if (!node->is_object()) throw ConfigError(key + ": cannot descend into a non-object");
      if (dot == std::string::npos) {
        json value = json::parse(text, nullptr, false);
        (*node)[part] = value.is_discarded() ? json(text) : value;
        break;
      }
      if (!node->contains(part)) (*node)[part] = json::object();
      node = &(*node)[part];
      start = dot + 1;
    }
  }
}

LabConfig load_config(const CommandSpec& spec) {
  std::ifstream in(spec.config_path);
  if (!in) throw std::runtime_error(spec.config_path.string() + ": cannot open config file");
  json root = json::parse(in, nullptr, false);
  if (root.is_discarded()) throw ConfigError(spec.config_path.string() + ": not valid JSON");
  if (!root.is_object()) throw ConfigError(spec.config_path.string() + ": top level must be an object");
  apply_overrides(root, spec.overrides);
  return config_from_json(root);
}

SweepConfig to_sweep_config(const LabConfig& cfg, unsigned jobs) {
  if (!cfg.population) throw ConfigError("population: required key is missing");
  SweepConfig s;
  s.population = *cfg.population;
  s.beta_grid = cfg.beta_grid;
  s.train_size = cfg.train_size;
  s.test_size_per_group = cfg.test_size_per_group;
  s.trials = cfg.trials;
  s.master_seed = cfg.seed;
  s.schedule = cfg.schedule;
  s.learning_rate = cfg.learning_rate;
  s.initial_bias = cfg.initial_bias;
  s.hard_mining = cfg.hard_mining;
  s.jobs = jobs;
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return s;
}

HyperplaneMcConfig to_mc_config(const LabConfig& cfg, unsigned jobs) {
  HyperplaneMcConfig m;
  m.K = cfg.mc.K;
  m.schedule = cfg.mc.schedule;
  m.learning_rate = cfg.mc.learning_rate;
  if (cfg.mc.displaced_start) m.initial_displacement = cfg.displacement;
  m.trials = cfg.mc.trials;
  m.master_seed = cfg.seed;
  m.jobs = jobs;
  return m;
}

// ---------------------------------------------------------------------------
// Reports

std::string fixed6(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

namespace {

const PopulationModel& require_population(const LabConfig& cfg) {
  if (!cfg.population) throw ConfigError("population: required key is missing");
  return *cfg.population;
}

const AnalysisSection& require_analysis(const LabConfig& cfg) {
  if (!cfg.analysis) throw ConfigError("analysis: required section is missing");
  return *cfg.analysis;
}

class Writer {
 public:
  Writer(fs::path dir, std::string stem, std::vector<fs::path>* written)
      : dir_(std::move(dir)), stem_(std::move(stem)), written_(written) {}

  void text(const std::string& suffix, const std::string& content) {
    const fs::path p = dir_ / (stem_ + suffix);
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(p.string() + ": cannot open for writing");
    out << content;
    out.close();
    if (!out) throw std::runtime_error(p.string() + ": write failed");
    if (written_) written_->push_back(p);
  }

  void json_file(const std::string& suffix, const json& j) { text(suffix, j.dump(2) + "\n"); }

 private:
  fs::path dir_;
  std::string stem_;
  std::vector<fs::path>* written_;
};

fs::path resolve_input(const CommandSpec& spec, const std::string& p) {
  fs::path path(p);
  if (path.is_absolute()) return path;
  return spec.config_path.parent_path() / path;
}

json sweep_json(const SweepResult& r) {
  json trials = json::array();
  for (const auto& t : r.trials) {
    json acc = json::array();
    for (std::size_t b = 0; b < r.config.beta_grid.size(); ++b) {
      acc.push_back(json{{"beta", r.config.beta_grid[b]},
                         {"major", t.at(b, Group::major)},
                         {"minor", t.at(b, Group::minor)}});
    }
    trials.push_back(json{{"trial", t.trial_index}, {"seed", t.seed}, {"accuracy", acc}});
  }
  json summary = json::array();
  for (const auto& s : r.summary) {
    summary.push_back(json{{"beta", s.beta},
                           {"group", std::string(to_string(s.group))},
                           {"mean_accuracy", s.mean_accuracy},
                           {"zeta", s.zeta}});
  }
  return json{{"trials", trials},
              {"summary", summary},
              {"mime", json::array({to_json_value(r.mime[0]), to_json_value(r.mime[1])})}};
}

void run_sweep_command(const CommandSpec& spec, const LabConfig& cfg, Writer& w, unsigned jobs) {
  const SweepResult r = run_sweep(to_sweep_config(cfg, jobs));
  if (spec.format == Format::json) {
    json out{{"config", config_to_json(cfg)}};
    out.update(sweep_json(r));
    w.json_file(".json", out);
    return;
  }
  std::ostringstream trials;
  trials << "trial,seed,beta,group,accuracy\n";
  for (const auto& t : r.trials) {
    for (std::size_t b = 0; b < r.config.beta_grid.size(); ++b) {
      for (Group g : {Group::major, Group::minor}) {
        trials << t.trial_index << ',' << t.seed << ',' << fixed6(r.config.beta_grid[b]) << ',' << to_string(g)
               << ',' << fixed6(t.at(b, g)) << '\n';
      }
    }
  }
  std::ostringstream summary;
  summary << "beta,group,mean_accuracy,zeta\n";
  for (const auto& s : r.summary) {
    summary << fixed6(s.beta) << ',' << to_string(s.group) << ',' << fixed6(s.mean_accuracy) << ','
            << fixed6(s.zeta) << '\n';
  }
  w.text(".csv", trials.str());
  w.text("_summary.csv", summary.str());
  w.json_file("_mime.json", json::array({to_json_value(r.mime[0]), to_json_value(r.mime[1])}));
  w.json_file("_config.json", config_to_json(cfg));
}

void run_verify_command(const LabConfig& cfg, Writer& w) {
  const PopulationModel& pop = require_population(cfg);
  json verdicts = json::object();
  auto attempt = [&](const char* name, auto&& fn) {
    try {
      verdicts[name] = to_json_value(fn());
    } catch (const std::invalid_argument& e) {
      // Outside a theorem's scope: report instead of failing the command.
      verdicts[name] = json{{"theorem", name}, {"holds", false}, {"case", nullptr}, {"error", e.what()}};
    }
  };
  attempt("T1", [&] { return check_theorem1(pop, cfg.displacement); });
  attempt("T2", [&] { return check_theorem2(pop, cfg.displacement); });
  attempt("T3", [&] { return check_theorem3(pop, cfg.displacement, true); });
  const RoleReport roles = validate_roles(pop);
  w.json_file(".json", json{{"config", config_to_json(cfg)},
                            {"roles",
                             json{{"overlap_major", roles.overlap_major},
                                  {"overlap_minor", roles.overlap_minor},
                                  {"roles_consistent", roles.roles_consistent}}},
                            {"verdicts", verdicts}});
}

void run_expected_update_command(const CommandSpec& spec, const LabConfig& cfg, Writer& w) {
  const PopulationModel& pop = require_population(cfg);
  const double d_major = ideal_threshold(pop.major);
  const int n = cfg.expected_update.points;
  const double span = cfg.expected_update.span;

  struct Row {
    Group group;
    double d;
    double exact;
    std::optional<double> approx;
  };
  std::vector<Row> rows;
  for (Group g : {Group::major, Group::minor}) {
    const GroupModel& model = pop.group(g);
    const double d_g = ideal_threshold(model);
    for (int i = 0; i < n; ++i) {
      const double offset = span * (2.0 * i / (n - 1) - 1.0);
      const double d = (2 * i == n - 1) ? d_major : d_major + offset;
      Row r{g, d, expected_update_exact(model, d), std::nullopt};
      if (model.prior() == 0.5) {
        const double eff = d - d_g;
        const double mag = expected_update_small_delta(model, std::fabs(eff), 0.0);
        r.approx = eff < 0.0 ? -mag : mag;
      }
      rows.push_back(r);
    }
  }
  if (spec.format == Format::json) {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back(json{{"group", std::string(to_string(r.group))},
                         {"d_current", r.d},
                         {"delta_b_exact", r.exact},
                         {"delta_b_approx", r.approx ? json(*r.approx) : json(nullptr)}});
    }
    w.json_file(".json", json{{"config", config_to_json(cfg)}, {"rows", arr}});
    return;
  }
  std::ostringstream csv;
  csv << "group,d_current,delta_b_exact,delta_b_approx\n";
  for (const auto& r : rows) {
    csv << to_string(r.group) << ',' << fixed6(r.d) << ',' << fixed6(r.exact) << ','
        << (r.approx ? fixed6(*r.approx) : std::string()) << '\n';
  }
  w.text(".csv", csv.str());
  w.json_file("_config.json", config_to_json(cfg));
}

void run_mc_command(const LabConfig& cfg, Writer& w, unsigned jobs) {
  const PopulationModel& pop = require_population(cfg);
  const auto cmp = mc_paired_hyperplane(pop, to_mc_config(cfg, jobs));
  w.json_file(".json", json{{"config", config_to_json(cfg)}, {"comparison", to_json_value(cmp)}});
}

struct LoadedFeatures {
  FeatureTable table;
  std::vector<double> weights;
};

LoadedFeatures load_features(const CommandSpec& spec, const AnalysisSection& a) {
  const fs::path fpath = resolve_input(spec, a.features);
  const fs::path wpath = resolve_input(spec, a.weights);
  std::ifstream fin(fpath);
  if (!fin) throw std::runtime_error(fpath.string() + ": cannot open feature file");
  std::ifstream win(wpath);
  if (!win) throw std::runtime_error(wpath.string() + ": cannot open weights file");
  LoadedFeatures lf;
  try {
    lf.table = read_feature_csv(fin);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(fpath.string() + ": " + e.what());
  }
  try {
    lf.weights = read_weights(win);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(wpath.string() + ": " + e.what());
  }
  return lf;
}

json chi2_cells(const std::array<CellReport, 4>& cells) {
  json arr = json::array();
  for (const auto& c : cells) {
    json j = to_json_value(c.report);
    json cell{{"group", std::string(to_string(c.group))}, {"class", to_int(c.label)}};
    cell.update(j);
    arr.push_back(cell);
  }
  return arr;
}

std::string histograms_csv(const FeatureAudit& audit) {
  std::ostringstream csv;
  csv << "group,class,bin,lower,upper,mass\n";
  for (const auto& g : audit.groups) {
    for (int cls = 1; cls <= 2; ++cls) {
      const ProjectedHistogram& h = cls == 1 ? g.class1 : g.class2;
      for (std::size_t i = 0; i < h.bins(); ++i) {
        csv << to_string(g.group) << ',' << cls << ',' << i << ',' << fixed6(h.bin_edges[i]) << ','
            << fixed6(h.bin_edges[i + 1]) << ',' << fixed6(h.masses[i]) << '\n';
      }
    }
  }
  return csv.str();
}

void run_analyze_command(const CommandSpec& spec, const LabConfig& cfg, Writer& w) {
  const AnalysisSection& a = require_analysis(cfg);
  const LoadedFeatures lf = load_features(spec, a);
  const auto points = project(lf.table, lf.weights);
  const FeatureAudit audit = audit_features(points, a.bins, a.ref);
  const auto cells = gaussianity_suite(lf.table, lf.weights, a.chi2_bins);

  json groups = json::array();
  for (const auto& g : audit.groups) {
    groups.push_back(json{{"group", std::string(to_string(g.group))},
                          {"overlap", g.overlap},
                          {"histogram_intersection", g.histogram_intersection},
                          {"ideal_threshold", g.ideal_threshold}});
  }
  json report{{"config", config_to_json(cfg)},
              {"major_overlap", audit.groups[0].overlap},
              {"minor_overlap", audit.groups[1].overlap},
              {"domain_gap", audit.domain_gap},
              {"bins", audit.bins},
              {"range", json::array({audit.lo, audit.hi})},
              {"groups", groups},
              {"chi2", chi2_cells(cells)}};
  if (spec.format == Format::json) {
    json hist = json::array();
    for (const auto& g : audit.groups) {
      hist.push_back(json{{"group", std::string(to_string(g.group))},
                          {"class1", to_json_value(g.class1)},
                          {"class2", to_json_value(g.class2)}});
    }
    report["histograms"] = hist;
    w.json_file(".json", report);
    return;
  }
  w.json_file(".json", report);
  w.text("_histograms.csv", histograms_csv(audit));
}

void run_chi2_command(const CommandSpec& spec, const LabConfig& cfg, Writer& w) {
  const AnalysisSection& a = require_analysis(cfg);
  const LoadedFeatures lf = load_features(spec, a);
  const auto cells = gaussianity_suite(lf.table, lf.weights, a.chi2_bins);
  w.json_file(".json", json{{"config", config_to_json(cfg)}, {"cells", chi2_cells(cells)}});
}

unsigned resolve_job_count(const CommandSpec& spec) {
  if (spec.jobs) return *spec.jobs;
  if (const char* env = std::getenv("MIME_LAB_JOBS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0') return static_cast<unsigned>(v);
  }
  return 0;
}

}  // namespace

int execute(const CommandSpec& spec, std::ostream& err, std::vector<fs::path>* written) {
  try {
    const LabConfig cfg = load_config(spec);
    std::error_code ec;
    fs::create_directories(spec.out_dir, ec);
    if (ec) throw std::runtime_error(spec.out_dir.string() + ": " + ec.message());
    Writer w(spec.out_dir, spec.command + "_" + std::to_string(cfg.seed), written);
    const unsigned jobs = resolve_job_count(spec);

    if (spec.command == "sweep") {
      run_sweep_command(spec, cfg, w, jobs);
    } else if (spec.command == "verify") {
      run_verify_command(cfg, w);
    } else if (spec.command == "expected-update") {
      run_expected_update_command(spec, cfg, w);
    } else if (spec.command == "mc-hyperplane") {
      run_mc_command(cfg, w, jobs);
    } else if (spec.command == "analyze-features") {
      run_analyze_command(spec, cfg, w);
    } else if (spec.command == "chi2") {
      run_chi2_command(spec, cfg, w);
    } else {
      throw std::runtime_error("unknown command '" + spec.command + "'");
    }
    return 0;
  } catch (const std::exception& e) {
    err << "mime-lab " << spec.command << ": " << e.what() << '\n';
    return 1;
  }
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CommandSpec spec;
  try {
    spec = parse_invocation(argv);
  } catch (const HelpRequested& h) {
    out << h.what();
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return 2;
  }
  std::vector<fs::path> written;
  const int status = execute(spec, err, &written);
  if (status == 0) {
    for (const auto& p : written) out << p.string() << '\n';
  }
  return status;
}

}  // namespace mime::cli
