#pragma once

// 1D bias-only perceptron and its augmented N-D extension.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "mime/distributions.hpp"
#include "mime/random_stream.hpp"

namespace mime {

/// Maps a score to a label: 2 when score > 0, 1 otherwise (sign(0) counts as -1).
inline ClassLabel label_from_score(double score) noexcept {
  return score > 0.0 ? ClassLabel::positive : ClassLabel::negative;
}

class Perceptron1D {
 public:
  /// learning_rate may be zero (a frozen classifier); negative throws.
  explicit Perceptron1D(double bias = 0.0, double learning_rate = 0.01);

  double bias() const noexcept { return bias_; }
  double learning_rate() const noexcept { return learning_rate_; }
  double threshold() const noexcept { return -bias_; }

  double score(double x) const noexcept { return x + bias_; }
  ClassLabel predict(double x) const noexcept { return label_from_score(score(x)); }

  /// Applies b += gamma (y = 2) or b -= gamma (y = 1) on a mistake. Returns
  /// whether the sample was misclassified.
  bool update(double x, ClassLabel y) noexcept;

  friend bool operator==(const Perceptron1D&, const Perceptron1D&) = default;

 private:
  double bias_;
  double learning_rate_;
};

class PerceptronND {
 public:
  /// weights holds n feature weights followed by the bias. Throws
  /// std::invalid_argument if fewer than two entries or negative rate.
  PerceptronND(std::vector<double> weights, double learning_rate);

  /// Unit first coordinate, zeros elsewhere: the default initialization.
  static PerceptronND with_unit_direction(std::size_t dim, double learning_rate);

  std::size_t dim() const noexcept { return weights_.size() - 1; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double learning_rate() const noexcept { return learning_rate_; }

  double score(std::span<const double> x) const;
  ClassLabel predict(std::span<const double> x) const { return label_from_score(score(x)); }
  bool update(std::span<const double> x, ClassLabel y);

  friend bool operator==(const PerceptronND&, const PerceptronND&) = default;

 private:
  std::vector<double> weights_;
  double learning_rate_;
};

struct TrainingSchedule {
  int epochs = 1;
  int minibatch_size = 1;
  bool shuffle = true;

  /// Throws std::invalid_argument unless epochs >= 1 and minibatch_size >= 1.
  void validate() const;

  friend bool operator==(const TrainingSchedule&, const TrainingSchedule&) = default;
};

struct EpochRecord {
  int epoch = 0;              // 1-based
  double train_error = 0.0;   // fraction misclassified after the epoch
  std::vector<double> parameters;  // bias for 1D, weights for N-D
  std::size_t updates = 0;    // updates fired during the epoch
};

struct VectorSample {
  std::vector<double> x;
  ClassLabel y = ClassLabel::negative;
};

namespace detail {

inline std::vector<double> snapshot(const Perceptron1D& p) { return {p.bias()}; }
inline std::vector<double> snapshot(const PerceptronND& p) { return p.weights(); }

inline ClassLabel predict_sample(const Perceptron1D& p, const LabeledSample& s) { return p.predict(s.x); }
inline ClassLabel predict_sample(const PerceptronND& p, const VectorSample& s) { return p.predict(s.x); }
inline bool update_sample(Perceptron1D& p, const LabeledSample& s) { return p.update(s.x, s.y); }
inline bool update_sample(PerceptronND& p, const VectorSample& s) { return p.update(s.x, s.y); }

}  // namespace detail

/// Called after each epoch with the model and its record.
template <typename Model>
using EpochCallback = std::function<void(const Model&, const EpochRecord&)>;

/// Epoch loop: optional shuffle of a visiting order, minibatches of size M
/// (last may be short), sequential per-sample updates inside each batch.
/// The data itself is not reordered. Throws std::invalid_argument on empty data.
template <typename Model, typename Sample>
std::vector<EpochRecord> train(Model& model, std::span<const Sample> data,
                               const TrainingSchedule& schedule, RandomStream& rng,
                               const std::type_identity_t<EpochCallback<Model>>& on_epoch = {}) {
  schedule.validate();
  if (data.empty()) throw std::invalid_argument("train: empty training data");

  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<EpochRecord> history;
  history.reserve(static_cast<std::size_t>(schedule.epochs));
  const auto m = static_cast<std::size_t>(schedule.minibatch_size);
  for (int epoch = 1; epoch <= schedule.epochs; ++epoch) {
    if (schedule.shuffle) rng.shuffle(std::span<std::size_t>(order));
    std::size_t updates = 0;
    for (std::size_t start = 0; start < order.size(); start += m) {
      const std::size_t stop = std::min(order.size(), start + m);
      for (std::size_t k = start; k < stop; ++k) {
        if (detail::update_sample(model, data[order[k]])) ++updates;
      }
    }
    std::size_t wrong = 0;
    for (const auto& s : data) {
      if (detail::predict_sample(model, s) != s.y) ++wrong;
    }
    EpochRecord rec{epoch, static_cast<double>(wrong) / static_cast<double>(data.size()),
                    detail::snapshot(model), updates};
    if (on_epoch) on_epoch(model, rec);
    history.push_back(std::move(rec));
  }
  return history;
}

template <typename Model, typename Sample>
std::vector<EpochRecord> train(Model& model, const std::vector<Sample>& data,
                               const TrainingSchedule& schedule, RandomStream& rng,
                               const std::type_identity_t<EpochCallback<Model>>& on_epoch = {}) {
  return train(model, std::span<const Sample>(data), schedule, rng, on_epoch);
}

}  // namespace mime
