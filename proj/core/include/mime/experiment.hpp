#pragma once

// Minority-training-ratio sweeps on simulated populations and the summary
// statistics reported on them.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "mime/distributions.hpp"
#include "mime/perceptron.hpp"
#include "mime/random_stream.hpp"

namespace mime {

struct HardMiningConfig {
  int batch_size = 30;
  int keep_per_class = 6;

  friend bool operator==(const HardMiningConfig&, const HardMiningConfig&) = default;
};

std::vector<double> default_beta_grid();

struct SweepConfig {
  PopulationModel population;
  std::vector<double> beta_grid = default_beta_grid();
  std::size_t train_size = 200;
  std::size_t test_size_per_group = 1000;
  std::size_t trials = 10;
  std::uint64_t master_seed = 0;
  TrainingSchedule schedule{10, 1, true};
  double learning_rate = 0.01;
  double initial_bias = 0.0;
  std::optional<HardMiningConfig> hard_mining;
  unsigned jobs = 0;  // execution only; never affects results

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct GroupSample {
  double x = 0.0;
  ClassLabel y = ClassLabel::negative;
  Group g = Group::major;

  friend bool operator==(const GroupSample&, const GroupSample&) = default;
};

/// n_minor = round-half-up(beta * total); each group's classes split evenly,
/// an odd count giving its extra sample to a class picked by a coin flip.
/// Rows are shuffled once. Throws std::invalid_argument for total < 2 or beta
/// outside [0, 1].
std::vector<GroupSample> build_training_set(const PopulationModel& pop, std::size_t total,
                                            double beta, RandomStream& rng);

/// Number of minority samples at a given beta.
std::size_t minority_count(std::size_t total, double beta);

struct TrialRecord {
  std::size_t trial_index = 0;
  std::uint64_t seed = 0;
  /// accuracy[b][g] for beta index b and group index g (0 major, 1 minor).
  std::vector<std::array<double, 2>> accuracy;
  std::size_t resample_count = 0;

  double at(std::size_t beta_index, Group g) const {
    return accuracy.at(beta_index)[g == Group::major ? 0 : 1];
  }
};

TrialRecord run_trial(const SweepConfig& config, std::size_t trial_index);

struct SummaryRow {
  double beta = 0.0;
  Group group = Group::major;
  double mean_accuracy = 0.0;
  double zeta = 0.0;
};

struct MimeMetrics {
  Group group = Group::major;
  std::size_t mime_trial_count = 0;
  std::size_t total_trials = 0;
  double avg_gain = 0.0;
};

struct SweepResult {
  SweepConfig config;
  std::vector<TrialRecord> trials;
  std::vector<SummaryRow> summary;  // beta-major, then major before minor
  std::array<MimeMetrics, 2> mime;  // major, minor
};

SweepResult run_sweep(const SweepConfig& config);

/// Index of beta in the grid; throws std::out_of_range if absent.
std::size_t beta_index(const std::vector<double>& grid, double beta);

/// Mean of a_g^i(beta) over trials.
double average_accuracy(const SweepResult& result, Group group, double beta);

/// Population std over trials of beta-mean-centered accuracies, per beta.
std::map<double, double> error_bound(const SweepResult& result, Group group);

/// A trial counts when max over beta > 0 of its accuracy beats beta = 0.
/// Throws std::invalid_argument unless the grid holds 0 and another value.
MimeMetrics mime_metrics(const SweepResult& result, Group group = Group::major);

/// Recomputes the summary rows and both MIME metrics from the trials.
void aggregate(SweepResult& result);

/// 1 - best test accuracy for a classifier trained and tested on one group,
/// using the config's train size, test size, schedule and seed.
double empirical_task_complexity(const PopulationModel& pop, Group group, const SweepConfig& config);

/// Lowest-confidence samples per class, confidence being the logistic of the
/// signed margin towards the true label. Keeps batch order among survivors.
std::vector<GroupSample> hard_mining_select(const std::vector<GroupSample>& batch,
                                            const Perceptron1D& model, int keep_per_class);

/// Confidence of the model in the sample's true label.
double hard_mining_confidence(const Perceptron1D& model, double x, ClassLabel y);

}  // namespace mime
