#pragma once

// Group-conditional two-class distributions and the closed-form quantities
// the MIME existence results are stated in.

#include <cstdint>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "mime/random_stream.hpp"

namespace mime {

/// Task label. Class 2 is the positive class and sits to the right of class 1
/// on the feature axis.
enum class ClassLabel : std::uint8_t { negative = 1, positive = 2 };

int to_int(ClassLabel label) noexcept;
/// Throws std::invalid_argument unless value is 1 or 2.
ClassLabel class_label_from_int(int value);

enum class Group : std::uint8_t { major, minor };

std::string_view to_string(Group group) noexcept;
/// Accepts "major" or "minor"; throws std::invalid_argument otherwise.
Group group_from_string(std::string_view name);

/// Normal class-conditional density.
class GaussianComponent {
 public:
  /// Throws std::invalid_argument unless stddev > 0 and both are finite.
  GaussianComponent(double mean, double stddev);

  double mean() const noexcept { return mean_; }
  double stddev() const noexcept { return stddev_; }

  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;
  double sf(double x) const;
  double quantile(double p) const;

  friend bool operator==(const GaussianComponent&, const GaussianComponent&) = default;

 private:
  double mean_;
  double stddev_;
};

/// Piecewise-linear density on a finite grid; zero outside [x_lo, x_hi].
/// Densities are rescaled by their trapezoid total so the CDF reaches exactly
/// one at the upper support bound.
class TabulatedDistribution {
 public:
  /// Throws std::invalid_argument if fewer than two points, x not strictly
  /// increasing, any density negative, or the trapezoid integral is not
  /// within 1e-6 of one.
  explicit TabulatedDistribution(std::vector<std::pair<double, double>> points);

  const std::vector<std::pair<double, double>>& points() const noexcept { return points_; }
  double lower() const noexcept { return points_.front().first; }
  double upper() const noexcept { return points_.back().first; }

  double pdf(double x) const;
  double cdf(double x) const;
  double sf(double x) const { return 1.0 - cdf(x); }
  double quantile(double p) const;
  double mean() const noexcept { return mean_; }

  friend bool operator==(const TabulatedDistribution& a, const TabulatedDistribution& b) {
    return a.points_ == b.points_;
  }

 private:
  std::vector<std::pair<double, double>> points_;  // as supplied
  std::vector<double> density_;                    // normalized
  std::vector<double> cumulative_;                 // CDF at each grid point
  double mean_ = 0.0;
};

using ClassDistribution = std::variant<GaussianComponent, TabulatedDistribution>;

double pdf(const ClassDistribution& dist, double x);
double cdf(const ClassDistribution& dist, double x);
double sf(const ClassDistribution& dist, double x);
double quantile(const ClassDistribution& dist, double p);
double mean(const ClassDistribution& dist);

/// One group's pair of class distributions plus Pr(y = 2).
class GroupModel {
 public:
  /// Throws std::invalid_argument if prior is outside [0, 1] or, when both
  /// classes are Gaussian, mean(class1) >= mean(class2).
  GroupModel(ClassDistribution class1, ClassDistribution class2, double prior = 0.5);
  /// Standard normal classes at -1 and +1, prior 0.5.
  GroupModel() : GroupModel(GaussianComponent(-1.0, 1.0), GaussianComponent(1.0, 1.0)) {}

  const ClassDistribution& class1() const noexcept { return class1_; }
  const ClassDistribution& class2() const noexcept { return class2_; }
  const ClassDistribution& distribution(ClassLabel label) const noexcept;
  double prior() const noexcept { return prior_; }

  /// True when both classes are Gaussian.
  bool is_gaussian() const noexcept;

  friend bool operator==(const GroupModel&, const GroupModel&) = default;

 private:
  ClassDistribution class1_;
  ClassDistribution class2_;
  double prior_;
};

/// Convenience constructor for the common Gaussian case.
GroupModel gaussian_group(double mean1, double std1, double mean2, double std2,
                          double prior = 0.5);

struct PopulationModel {
  GroupModel major;
  GroupModel minor;

  const GroupModel& group(Group g) const noexcept { return g == Group::major ? major : minor; }

  friend bool operator==(const PopulationModel&, const PopulationModel&) = default;
};

struct LabeledSample {
  double x = 0.0;
  ClassLabel y = ClassLabel::negative;

  friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

/// Class-conditional density p_y(x), not prior weighted.
double pdf(const GroupModel& model, ClassLabel label, double x);
double class_cdf(const GroupModel& model, ClassLabel label, double x);
double class_sf(const GroupModel& model, ClassLabel label, double x);
double class_quantile(const GroupModel& model, ClassLabel label, double p);

/// Draws y with Pr(y = 2) = prior, then x from that class. Consumes exactly
/// two uniforms from the stream.
LabeledSample sample(const GroupModel& model, RandomStream& rng);

/// Draws x from a fixed class (one uniform).
double sample_class(const GroupModel& model, ClassLabel label, RandomStream& rng);

/// Point between the class means where prior-weighted likelihoods are equal.
/// Throws std::domain_error when there is no crossing in that interval.
double ideal_threshold(const GroupModel& model);

/// Bayes error at the ideal threshold.
double overlap(const GroupModel& model);

/// T(x) = prior * P2(X < x) - (1 - prior) * P1(X > x).
double signed_tail_weight(const GroupModel& model, double x);

/// Signed difference d_minor - d_major of the ideal thresholds.
double domain_gap(const PopulationModel& pop);

/// Real points where the two normal densities are equal, ascending.
/// Throws std::invalid_argument for identical components.
std::vector<double> gaussian_intersection(const GaussianComponent& a, const GaussianComponent& b);

/// f in O_major / O_minor = (p2_major(d_major) / p2_minor(d_minor)) * f.
/// Throws std::domain_error when either class-2 density at its threshold is zero.
double theorem2_f(const PopulationModel& pop);

struct RoleReport {
  double overlap_major = 0.0;
  double overlap_minor = 0.0;
  bool roles_consistent = false;  // overlap_minor >= overlap_major
};

/// Checks that the group labelled minor is the harder one.
RoleReport validate_roles(const PopulationModel& pop);

}  // namespace mime
