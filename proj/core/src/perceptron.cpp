#include "mime/perceptron.hpp"

#include <cmath>
#include <string>

namespace mime {

namespace {

void check_rate(double learning_rate) {
  if (!std::isfinite(learning_rate) || learning_rate < 0.0) {
    throw std::invalid_argument("learning rate must be finite and non-negative");
  }
}

}  // namespace

Perceptron1D::Perceptron1D(double bias, double learning_rate)
    : bias_(bias), learning_rate_(learning_rate) {
  check_rate(learning_rate);
}

bool Perceptron1D::update(double x, ClassLabel y) noexcept {
  if (predict(x) == y) return false;
  bias_ += (y == ClassLabel::positive) ? learning_rate_ : -learning_rate_;
  return true;
}

PerceptronND::PerceptronND(std::vector<double> weights, double learning_rate)
    : weights_(std::move(weights)), learning_rate_(learning_rate) {
  if (weights_.size() < 2) {
    throw std::invalid_argument("PerceptronND: need at least one feature weight plus the bias");
  }
  check_rate(learning_rate);
}

PerceptronND PerceptronND::with_unit_direction(std::size_t dim, double learning_rate) {
  std::vector<double> w(dim + 1, 0.0);
  if (dim > 0) w[0] = 1.0;
  return PerceptronND(std::move(w), learning_rate);
}

double PerceptronND::score(std::span<const double> x) const {
  if (x.size() != dim()) {
    throw std::invalid_argument("PerceptronND: input has " + std::to_string(x.size()) +
                                " features, expected " + std::to_string(dim()));
  }
  double s = weights_.back();
  for (std::size_t i = 0; i < x.size(); ++i) s += weights_[i] * x[i];
  return s;
}

bool PerceptronND::update(std::span<const double> x, ClassLabel y) {
  if (predict(x) == y) return false;
  const double step = (y == ClassLabel::positive) ? learning_rate_ : -learning_rate_;
  for (std::size_t i = 0; i < x.size(); ++i) weights_[i] += step * x[i];
  weights_.back() += step;
  return true;
}

void TrainingSchedule::validate() const {
  if (epochs < 1) throw std::invalid_argument("schedule: epochs must be >= 1");
  if (minibatch_size < 1) throw std::invalid_argument("schedule: minibatch_size must be >= 1");
}

}  // namespace mime
