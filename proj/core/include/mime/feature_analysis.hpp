#pragma once

// Audit of projected latent features: histograms, overlap and domain-gap
// estimates, and chi-square Gaussianity checks.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mime/distributions.hpp"

namespace mime {

struct FeatureRow {
  Group group = Group::major;
  ClassLabel label = ClassLabel::negative;
  std::vector<double> features;
};

class FeatureTable {
 public:
  FeatureTable() = default;
  /// Throws std::invalid_argument when rows disagree on dimension or D = 0.
  explicit FeatureTable(std::vector<FeatureRow> rows);

  const std::vector<FeatureRow>& rows() const noexcept { return rows_; }
  std::size_t dim() const noexcept { return rows_.empty() ? 0 : rows_.front().features.size(); }
  std::size_t size() const noexcept { return rows_.size(); }

 private:
  std::vector<FeatureRow> rows_;
};

/// Parses `group,class,f_0,...,f_{D-1}`. Errors name the offending line.
FeatureTable read_feature_csv(std::istream& in);
void write_feature_csv(std::ostream& out, const FeatureTable& table);

/// One decimal per line; blank lines ignored. Throws on an all-zero vector.
std::vector<double> read_weights(std::istream& in);

struct ProjectedPoint {
  Group group = Group::major;
  ClassLabel label = ClassLabel::negative;
  double x = 0.0;
};

/// x = w^T f per row, no bias. Throws on dimension mismatch or zero w.
std::vector<ProjectedPoint> project(const FeatureTable& table, const std::vector<double>& w);

/// Values of one (group, class) cell.
std::vector<double> cell_values(const std::vector<ProjectedPoint>& points, Group g, ClassLabel y);

struct ProjectedHistogram {
  std::vector<double> bin_edges;  // bins + 1
  std::vector<double> masses;     // bins, summing to 1
  std::size_t sample_count = 0;

  std::size_t bins() const noexcept { return masses.size(); }
  std::vector<double> centers() const;
  /// Mass-weighted mean of the bin centers.
  double mass_mean() const;
};

/// Equal-width bins over [lo, hi]. Bins are closed on the left and open on
/// the right except the last, which also holds hi; values outside the range
/// count in the end bins. Throws for empty values, bins < 1 or lo >= hi.
ProjectedHistogram build_histogram(const std::vector<double>& values, std::size_t bins, double lo,
                                   double hi);

/// Sum of bin-wise minima. Throws std::invalid_argument on edge mismatch.
double histogram_overlap(const ProjectedHistogram& h1, const ProjectedHistogram& h2);

/// Sum of bin-wise minima of the class histograms scaled by their class
/// shares; this estimates the Bayes error O of the pair.
double weighted_histogram_overlap(const ProjectedHistogram& h1, const ProjectedHistogram& h2);

inline constexpr std::size_t kThresholdGridPoints = 5000;

/// Degree-5 least-squares fits of both histograms, compared on a
/// 5000-point grid over [-ref, ref] limited to the span between the two
/// mass means; returns the grid point where the fits are closest.
/// Throws for fewer than 7 bins, empty histograms, or an empty search span.
double estimate_ideal_threshold(const ProjectedHistogram& h1, const ProjectedHistogram& h2,
                                double ref = 5.0);

using HistogramPair = std::pair<ProjectedHistogram, ProjectedHistogram>;

double estimate_domain_gap(const HistogramPair& major, const HistogramPair& minor, double ref = 5.0);

/// Least-squares polynomial coefficients, lowest degree first, in the raw
/// abscissa. Internally solved on centered and scaled abscissae.
std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree);
double polyval(const std::vector<double>& coeffs, double x);

struct Chi2Report {
  double statistic = 0.0;
  int dof = 0;
  double critical_value = 0.0;
  bool reject_gaussian = false;
  std::size_t bins = 0;
  double sample_mean = 0.0;
  double sample_std = 0.0;
  std::size_t sample_count = 0;
  std::vector<std::size_t> observed;
  double expected = 0.0;
  bool low_count_warning = false;  // fewer than 5 samples per bin on average
};

/// Equiprobable bins from the fitted normal; counts use (lower, upper].
/// Throws for bins < 4 or zero sample spread.
Chi2Report chi_square_gof(const std::vector<double>& values, std::size_t bins);

/// Inverse chi-square CDF. Throws std::invalid_argument unless dof >= 1 and
/// 0 < level < 1.
double chi2_critical(int dof, double level = 0.95);

struct CellReport {
  Group group = Group::major;
  ClassLabel label = ClassLabel::negative;
  Chi2Report report;
};

/// Projects and tests each (group, class) cell with
/// bins = min(configured_bins, floor(n / 5)). Throws on an empty cell.
std::array<CellReport, 4> gaussianity_suite(const FeatureTable& table, const std::vector<double>& w,
                                            std::size_t configured_bins);

struct GroupAudit {
  Group group = Group::major;
  ProjectedHistogram class1;
  ProjectedHistogram class2;
  double overlap = 0.0;               // class-share weighted intersection
  double histogram_intersection = 0.0;  // plain sum of minima
  double ideal_threshold = 0.0;
};

struct FeatureAudit {
  std::array<GroupAudit, 2> groups;  // major, minor
  double domain_gap = 0.0;
  std::size_t bins = 0;
  double lo = 0.0;
  double hi = 0.0;
  double ref = 5.0;
};

/// Histograms every cell over the common range of all projections.
FeatureAudit audit_features(const std::vector<ProjectedPoint>& points, std::size_t bins, double ref = 5.0);

}  // namespace mime
