#include "mime/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mime/parallel.hpp"

namespace mime {

std::vector<double> default_beta_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  return grid;
}

void SweepConfig::validate() const {
  if (beta_grid.empty()) throw std::invalid_argument("sweep.beta_grid: must not be empty");
  for (std::size_t i = 0; i < beta_grid.size(); ++i) {
    const double b = beta_grid[i];
    if (!(b >= 0.0 && b <= 1.0)) {
      throw std::invalid_argument("sweep.beta_grid: values must lie in [0, 1]");
    }
    if (i > 0 && !(b > beta_grid[i - 1])) {
      throw std::invalid_argument("sweep.beta_grid: values must be strictly increasing");
    }
  }
  if (beta_grid.front() != 0.0) throw std::invalid_argument("sweep.beta_grid: must contain 0");
  if (train_size < 2) throw std::invalid_argument("sweep.train_size: must be >= 2");
  if (test_size_per_group < 1) throw std::invalid_argument("sweep.test_size_per_group: must be >= 1");
  if (trials < 1) throw std::invalid_argument("sweep.trials: must be >= 1");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("sweep.learning_rate: must be finite and >= 0");
  }
  schedule.validate();
  if (hard_mining) {
    if (hard_mining->batch_size < 1) throw std::invalid_argument("sweep.hard_mining.batch_size: must be >= 1");
    if (hard_mining->keep_per_class < 1) {
      throw std::invalid_argument("sweep.hard_mining.keep_per_class: must be >= 1");
    }
  }
}

std::size_t minority_count(std::size_t total, double beta) {
  // Round half up; the small guard absorbs representation error in beta.
  return static_cast<std::size_t>(std::floor(beta * static_cast<double>(total) + 0.5 + 1e-9));
}

namespace {

// Appends n class-balanced samples from one group.
void append_balanced(std::vector<GroupSample>& out, const GroupModel& model, Group g, std::size_t n,
                     RandomStream& rng) {
  std::size_t n1 = n / 2;
  std::size_t n2 = n / 2;
  if (n % 2 == 1) {
    if (rng.below(2) == 0) {
      ++n1;
    } else {
      ++n2;
    }
  }
  for (std::size_t i = 0; i < n1; ++i) {
    out.push_back({sample_class(model, ClassLabel::negative, rng), ClassLabel::negative, g});
  }
  for (std::size_t i = 0; i < n2; ++i) {
    out.push_back({sample_class(model, ClassLabel::positive, rng), ClassLabel::positive, g});
  }
}

}  // namespace

std::vector<GroupSample> build_training_set(const PopulationModel& pop, std::size_t total,
                                            double beta, RandomStream& rng) {
  if (total < 2) throw std::invalid_argument("build_training_set: total must be >= 2");
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("build_training_set: beta must lie in [0, 1]");
  }
  const std::size_t n_minor = minority_count(total, beta);
  std::vector<GroupSample> out;
  out.reserve(total);
  append_balanced(out, pop.major, Group::major, total - n_minor, rng);
  append_balanced(out, pop.minor, Group::minor, n_minor, rng);
  rng.shuffle(std::span<GroupSample>(out));
  return out;
}

double hard_mining_confidence(const Perceptron1D& model, double x, ClassLabel y) {
  const double margin = y == ClassLabel::positive ? model.score(x) : -model.score(x);
  return 1.0 / (1.0 + std::exp(-margin));
}

std::vector<GroupSample> hard_mining_select(const std::vector<GroupSample>& batch,
                                            const Perceptron1D& model, int keep_per_class) {
  if (keep_per_class < 1) throw std::invalid_argument("hard_mining_select: keep_per_class must be >= 1");
  std::vector<bool> keep(batch.size(), false);
  for (ClassLabel cls : {ClassLabel::negative, ClassLabel::positive}) {
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (batch[i].y == cls) ranked.emplace_back(hard_mining_confidence(model, batch[i].x, cls), i);
    }
    // Stable on index, so equal confidences keep batch order.
    std::sort(ranked.begin(), ranked.end());
    const auto n = std::min(ranked.size(), static_cast<std::size_t>(keep_per_class));
    for (std::size_t k = 0; k < n; ++k) keep[ranked[k].second] = true;
  }
  std::vector<GroupSample> out;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (keep[i]) out.push_back(batch[i]);
  }
  return out;
}

namespace {

struct TestSet {
  std::vector<double> x;
  std::vector<ClassLabel> y;
};

TestSet draw_test_set(const GroupModel& model, std::size_t n, RandomStream& rng) {
  std::vector<GroupSample> rows;
  append_balanced(rows, model, Group::major, n, rng);
  TestSet t;
  for (const auto& r : rows) {
    t.x.push_back(r.x);
    t.y.push_back(r.y);
  }
  return t;
}

double accuracy(const Perceptron1D& model, const TestSet& test) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < test.x.size(); ++i) {
    if (model.predict(test.x[i]) == test.y[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.x.size());
}

// Trains from the fixed initialization and returns the best per-epoch test
// accuracy on each supplied test set, maximized independently.
std::vector<double> best_epoch_accuracy(const SweepConfig& config,
                                        const std::vector<GroupSample>& train_set,
                                        const std::vector<const TestSet*>& tests, RandomStream& rng) {
  Perceptron1D model(config.initial_bias, config.learning_rate);
  std::vector<double> best(tests.size(), 0.0);
  auto record = [&](const Perceptron1D& m) {
    for (std::size_t k = 0; k < tests.size(); ++k) best[k] = std::max(best[k], accuracy(m, *tests[k]));
  };

  std::vector<LabeledSample> data;
  data.reserve(train_set.size());
  for (const auto& s : train_set) data.push_back({s.x, s.y});

  if (!config.hard_mining) {
    train(model, data, config.schedule, rng,
          [&](const Perceptron1D& m, const EpochRecord&) { record(m); });
    return best;
  }

  const auto batch = static_cast<std::size_t>(config.hard_mining->batch_size);
  std::vector<std::size_t> order(train_set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (int epoch = 1; epoch <= config.schedule.epochs; ++epoch) {
    if (config.schedule.shuffle) rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t stop = std::min(order.size(), start + batch);
      std::vector<GroupSample> chunk;
      for (std::size_t k = start; k < stop; ++k) chunk.push_back(train_set[order[k]]);
      for (const auto& s : hard_mining_select(chunk, model, config.hard_mining->keep_per_class)) {
        model.update(s.x, s.y);
      }
    }
    record(model);
  }
  return best;
}

}  // namespace

TrialRecord run_trial(const SweepConfig& config, std::size_t trial_index) {
  if (trial_index >= config.trials) throw std::invalid_argument("run_trial: trial_index out of range");
  TrialRecord rec;
  rec.trial_index = trial_index;
  rec.seed = derive_seed(config.master_seed, trial_index);

  RandomStream test_rng = RandomStream::derived(rec.seed, 0);
  const TestSet test_major = draw_test_set(config.population.major, config.test_size_per_group, test_rng);
  const TestSet test_minor = draw_test_set(config.population.minor, config.test_size_per_group, test_rng);
  const std::vector<const TestSet*> tests{&test_major, &test_minor};

  rec.accuracy.resize(config.beta_grid.size());
  for (std::size_t b = 0; b < config.beta_grid.size(); ++b) {
    RandomStream rng = RandomStream::derived(rec.seed, b + 1);
    const auto train_set = build_training_set(config.population, config.train_size, config.beta_grid[b], rng);
    const auto best = best_epoch_accuracy(config, train_set, tests, rng);
    rec.accuracy[b] = {best[0], best[1]};
  }
  return rec;
}

std::size_t beta_index(const std::vector<double>& grid, double beta) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::fabs(grid[i] - beta) < 1e-12) return i;
  }
  throw std::out_of_range("beta " + std::to_string(beta) + " is not in the grid");
}

double average_accuracy(const SweepResult& result, Group group, double beta) {
  if (result.trials.empty()) throw std::invalid_argument("average_accuracy: no trials");
  const std::size_t b = beta_index(result.config.beta_grid, beta);
  double sum = 0.0;
  for (const auto& t : result.trials) sum += t.at(b, group);
  return sum / static_cast<double>(result.trials.size());
}

std::map<double, double> error_bound(const SweepResult& result, Group group) {
  const auto& grid = result.config.beta_grid;
  const std::size_t n = result.trials.size();
  std::map<double, double> out;
  if (n == 0) throw std::invalid_argument("error_bound: no trials");
  // centered[i][b] = a_i(b) - mean_b a_i(b)
  std::vector<std::vector<double>> centered(n, std::vector<double>(grid.size()));
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t b = 0; b < grid.size(); ++b) row += result.trials[i].at(b, group);
    row /= static_cast<double>(grid.size());
    for (std::size_t b = 0; b < grid.size(); ++b) centered[i][b] = result.trials[i].at(b, group) - row;
  }
  for (std::size_t b = 0; b < grid.size(); ++b) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += centered[i][b];
    m /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (centered[i][b] - m) * (centered[i][b] - m);
    out[grid[b]] = std::sqrt(ss / static_cast<double>(n));
  }
  return out;
}

MimeMetrics mime_metrics(const SweepResult& result, Group group) {
  const auto& grid = result.config.beta_grid;
  if (grid.size() < 2 || grid.front() != 0.0) {
    throw std::invalid_argument("mime_metrics: beta grid must contain 0 and at least one other value");
  }
  MimeMetrics m;
  m.group = group;
  m.total_trials = result.trials.size();
  if (result.trials.empty()) return m;
  double gain_sum = 0.0;
  for (const auto& t : result.trials) {
    double best = t.at(1, group);
    for (std::size_t b = 2; b < grid.size(); ++b) best = std::max(best, t.at(b, group));
    const double gain = best - t.at(0, group);
    if (gain > 0.0) ++m.mime_trial_count;
    gain_sum += gain;
  }
  m.avg_gain = gain_sum / static_cast<double>(result.trials.size());
  return m;
}

void aggregate(SweepResult& result) {
  result.summary.clear();
  const auto zeta_major = error_bound(result, Group::major);
  const auto zeta_minor = error_bound(result, Group::minor);
  for (double beta : result.config.beta_grid) {
    result.summary.push_back({beta, Group::major, average_accuracy(result, Group::major, beta),
                              zeta_major.at(beta)});
    result.summary.push_back({beta, Group::minor, average_accuracy(result, Group::minor, beta),
                              zeta_minor.at(beta)});
  }
  result.mime = {mime_metrics(result, Group::major), mime_metrics(result, Group::minor)};
}

SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  SweepResult result;
  result.config = config;
  result.trials.resize(config.trials);
  parallel_for(config.trials, config.jobs,
               [&](std::size_t t) { result.trials[t] = run_trial(config, t); });
  aggregate(result);
  return result;
}

double empirical_task_complexity(const PopulationModel& pop, Group group, const SweepConfig& config) {
  SweepConfig cfg = config;
  cfg.population = pop;
  cfg.beta_grid = {0.0};
  cfg.validate();
  const GroupModel& model = pop.group(group);
  const PopulationModel single{model, model};
  std::vector<double> best(cfg.trials);
  parallel_for(cfg.trials, cfg.jobs, [&](std::size_t t) {
    const std::uint64_t seed = derive_seed(cfg.master_seed, t);
    RandomStream test_rng = RandomStream::derived(seed, 0);
    const TestSet test = draw_test_set(model, cfg.test_size_per_group, test_rng);
    RandomStream rng = RandomStream::derived(seed, 1);
    const auto train_set = build_training_set(single, cfg.train_size, 0.0, rng);
    best[t] = best_epoch_accuracy(cfg, train_set, {&test}, rng)[0];
  });
  double sum = 0.0;
  for (double a : best) sum += a;
  return 1.0 - sum / static_cast<double>(best.size());
}

}  // namespace mime
