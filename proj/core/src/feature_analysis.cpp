#include "mime/feature_analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "mime/special_functions.hpp"

namespace mime {

FeatureTable::FeatureTable(std::vector<FeatureRow> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) return;
  const std::size_t d = rows_.front().features.size();
  if (d == 0) throw std::invalid_argument("FeatureTable: feature dimension must be >= 1");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].features.size() != d) {
      throw std::invalid_argument("FeatureTable: row " + std::to_string(i) + " has " +
                                  std::to_string(rows_[i].features.size()) + " features, expected " +
                                  std::to_string(d));
    }
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double parse_double(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(where + ": '" + t + "' is not a number");
  }
  if (used != t.size() || !std::isfinite(v)) {
    throw std::invalid_argument(where + ": '" + t + "' is not a finite number");
  }
  return v;
}

}  // namespace

FeatureTable read_feature_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("feature csv: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv(line);
  if (header.size() < 3 || trim(header[0]) != "group" || trim(header[1]) != "class") {
    throw std::invalid_argument("feature csv: header must be group,class,f_0,...");
  }
  for (std::size_t j = 2; j < header.size(); ++j) {
    if (trim(header[j]) != "f_" + std::to_string(j - 2)) {
      throw std::invalid_argument("feature csv: header column " + std::to_string(j + 1) +
                                  " must be f_" + std::to_string(j - 2));
    }
  }
  const std::size_t d = header.size() - 2;
  std::vector<FeatureRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    const std::string where = "feature csv line " + std::to_string(line_no);
    if (fields.size() != d + 2) {
      throw std::invalid_argument(where + ": expected " + std::to_string(d + 2) + " fields, got " +
                                  std::to_string(fields.size()));
    }
    FeatureRow row;
    try {
      row.group = group_from_string(trim(fields[0]));
      row.label = class_label_from_int(std::stoi(trim(fields[1])));
    } catch (const std::exception& e) {
      throw std::invalid_argument(where + ": " + e.what());
    }
    row.features.reserve(d);
    for (std::size_t j = 0; j < d; ++j) row.features.push_back(parse_double(fields[j + 2], where));
    rows.push_back(std::move(row));
  }
  return FeatureTable(std::move(rows));
}

void write_feature_csv(std::ostream& out, const FeatureTable& table) {
  out << "group,class";
  for (std::size_t j = 0; j < table.dim(); ++j) out << ",f_" << j;
  out << '\n';
  out.precision(17);
  for (const auto& r : table.rows()) {
    out << to_string(r.group) << ',' << to_int(r.label);
    for (double f : r.features) out << ',' << f;
    out << '\n';
  }
}

std::vector<double> read_weights(std::istream& in) {
  std::vector<double> w;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    w.push_back(parse_double(line, "weights line " + std::to_string(line_no)));
  }
  if (w.empty()) throw std::invalid_argument("weights: no values");
  if (std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; })) {
    throw std::invalid_argument("weights: vector must be nonzero");
  }
  return w;
}

std::vector<ProjectedPoint> project(const FeatureTable& table, const std::vector<double>& w) {
  if (w.size() != table.dim() && table.size() > 0) {
    throw std::invalid_argument("project: weights have length " + std::to_string(w.size()) +
                                ", features have " + std::to_string(table.dim()));
  }
  if (std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; })) {
    throw std::invalid_argument("project: weight vector must be nonzero");
  }
  std::vector<ProjectedPoint> out;
  out.reserve(table.size());
  for (const auto& r : table.rows()) {
    double x = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) x += w[j] * r.features[j];
    out.push_back({r.group, r.label, x});
  }
  return out;
}

std::vector<double> cell_values(const std::vector<ProjectedPoint>& points, Group g, ClassLabel y) {
  std::vector<double> out;
  for (const auto& p : points) {
    if (p.group == g && p.label == y) out.push_back(p.x);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> ProjectedHistogram::centers() const {
  std::vector<double> c(bins());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.5 * (bin_edges[i] + bin_edges[i + 1]);
  return c;
}

double ProjectedHistogram::mass_mean() const {
  const auto c = centers();
  double m = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    m += masses[i] * c[i];
    total += masses[i];
  }
  return total > 0.0 ? m / total : 0.0;
}

ProjectedHistogram build_histogram(const std::vector<double>& values, std::size_t bins, double lo,
                                   double hi) {
  if (values.empty()) throw std::invalid_argument("build_histogram: no values");
  if (bins < 1) throw std::invalid_argument("build_histogram: bins must be >= 1");
  if (!(lo < hi)) throw std::invalid_argument("build_histogram: need lo < hi");
  ProjectedHistogram h;
  h.bin_edges.resize(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) h.bin_edges[i] = lo + width * static_cast<double>(i);
  h.bin_edges.back() = hi;
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    std::size_t k = 0;
    if (v >= hi) {
      k = bins - 1;
    } else if (v > lo) {
      k = std::min(bins - 1, static_cast<std::size_t>((v - lo) / width));
      // Guard against rounding across an edge.
      if (k + 1 < bins && v >= h.bin_edges[k + 1]) ++k;
      if (k > 0 && v < h.bin_edges[k]) --k;
    }
    ++counts[k];
  }
  h.sample_count = values.size();
  h.masses.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    h.masses[i] = static_cast<double>(counts[i]) / static_cast<double>(values.size());
  }
  return h;
}

namespace {

void require_same_edges(const ProjectedHistogram& h1, const ProjectedHistogram& h2) {
  if (h1.bin_edges != h2.bin_edges) {
    throw std::invalid_argument("histogram overlap: histograms must share bin edges");
  }
}

}  // namespace

double histogram_overlap(const ProjectedHistogram& h1, const ProjectedHistogram& h2) {
  require_same_edges(h1, h2);
  double sm = 0.0;
  for (std::size_t i = 0; i < h1.bins(); ++i) sm += std::min(h1.masses[i], h2.masses[i]);
  return sm;
}

double weighted_histogram_overlap(const ProjectedHistogram& h1, const ProjectedHistogram& h2) {
  require_same_edges(h1, h2);
  const double n = static_cast<double>(h1.sample_count + h2.sample_count);
  if (n == 0.0) throw std::invalid_argument("weighted_histogram_overlap: empty histograms");
  const double w1 = static_cast<double>(h1.sample_count) / n;
  const double w2 = static_cast<double>(h2.sample_count) / n;
  double sm = 0.0;
  for (std::size_t i = 0; i < h1.bins(); ++i) sm += std::min(w1 * h1.masses[i], w2 * h2.masses[i]);
  return sm;
}

// ---------------------------------------------------------------------------

std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree) {
  if (degree < 0) throw std::invalid_argument("polyfit: degree must be >= 0");
  if (x.size() != y.size()) throw std::invalid_argument("polyfit: x and y differ in length");
  const auto n = static_cast<Eigen::Index>(x.size());
  const Eigen::Index m = degree + 1;
  if (n < m) throw std::invalid_argument("polyfit: not enough points for the degree");

  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  const double center = 0.5 * (*mn + *mx);
  const double scale = (*mx > *mn) ? 0.5 * (*mx - *mn) : 1.0;

  Eigen::MatrixXd V(n, m);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = (x[static_cast<std::size_t>(i)] - center) / scale;
    double p = 1.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      V(i, j) = p;
      p *= t;
    }
    rhs(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd c = V.colPivHouseholderQr().solve(rhs);

  // Expand q(t) with t = (x - center) / scale into powers of x.
  std::vector<double> out(static_cast<std::size_t>(m), 0.0);
  std::vector<double> basis{1.0};  // coefficients of t^j in x
  const double a = 1.0 / scale;
  const double b = -center / scale;
  for (Eigen::Index j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < basis.size(); ++k) out[k] += c(j) * basis[k];
    std::vector<double> next(basis.size() + 1, 0.0);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      next[k] += b * basis[k];
      next[k + 1] += a * basis[k];
    }
    basis = std::move(next);
  }
  return out;
}

double polyval(const std::vector<double>& coeffs, double x) {
  double v = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
  return v;
}

double estimate_ideal_threshold(const ProjectedHistogram& h1, const ProjectedHistogram& h2, double ref) {
  if (h1.bins() < 7 || h2.bins() < 7) {
    throw std::invalid_argument("estimate_ideal_threshold: need at least 7 bins");
  }
  if (h1.sample_count == 0 || h2.sample_count == 0) {
    throw std::invalid_argument("estimate_ideal_threshold: empty histogram");
  }
  if (!(ref > 0.0)) throw std::invalid_argument("estimate_ideal_threshold: ref must be positive");
  const auto f1 = polyfit(h1.centers(), h1.masses, 5);
  const auto f2 = polyfit(h2.centers(), h2.masses, 5);
  const double m1 = h1.mass_mean();
  const double m2 = h2.mass_mean();
  const double lo = std::min(m1, m2);
  const double hi = std::max(m1, m2);

  const double step = 2.0 * ref / static_cast<double>(kThresholdGridPoints - 1);
  double best_z = std::numeric_limits<double>::quiet_NaN();
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kThresholdGridPoints; ++i) {
    const double z = -ref + step * static_cast<double>(i);
    if (z < lo || z > hi) continue;
    const double gap = std::fabs(polyval(f1, z) - polyval(f2, z));
    if (gap < best_gap) {
      best_gap = gap;
      best_z = z;
    }
  }
  if (std::isnan(best_z)) {
    throw std::invalid_argument("estimate_ideal_threshold: no grid point between the histogram means");
  }
  return best_z;
}

double estimate_domain_gap(const HistogramPair& major, const HistogramPair& minor, double ref) {
  return std::fabs(estimate_ideal_threshold(minor.first, minor.second, ref) -
                   estimate_ideal_threshold(major.first, major.second, ref));
}

// ---------------------------------------------------------------------------

double chi2_critical(int dof, double level) {
  if (dof < 1) throw std::invalid_argument("chi2_critical: dof must be >= 1");
  return special::chi2_quantile(level, static_cast<double>(dof));
}

Chi2Report chi_square_gof(const std::vector<double>& values, std::size_t bins) {
  if (bins < 4) throw std::invalid_argument("chi_square_gof: need at least 4 bins");
  if (values.empty()) throw std::invalid_argument("chi_square_gof: no values");
  Chi2Report r;
  r.bins = bins;
  r.sample_count = values.size();
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  r.sample_mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - r.sample_mean) * (v - r.sample_mean);
  r.sample_std = std::sqrt(ss / n);
  if (!(r.sample_std > 0.0)) throw std::invalid_argument("chi_square_gof: zero sample spread");

  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  auto count_at_most = [&](double edge) {
    return static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), edge) - sorted.begin());
  };

  r.expected = n / static_cast<double>(bins);
  r.observed.resize(bins);
  std::size_t below = 0;  // count <= previous upper edge; first lower edge is -inf
  for (std::size_t i = 1; i <= bins; ++i) {
    const std::size_t upto =
        i == bins ? sorted.size()
                  : count_at_most(r.sample_mean + r.sample_std * special::normal_quantile(
                                                      static_cast<double>(i) / static_cast<double>(bins)));
    r.observed[i - 1] = upto - below;
    below = upto;
  }
  for (std::size_t o : r.observed) {
    const double d = static_cast<double>(o) - r.expected;
    r.statistic += d * d / r.expected;
  }
  r.dof = static_cast<int>(bins) - 3;
  r.critical_value = chi2_critical(r.dof);
  r.reject_gaussian = r.statistic > r.critical_value;
  r.low_count_warning = values.size() < 5 * bins;
  return r;
}

std::array<CellReport, 4> gaussianity_suite(const FeatureTable& table, const std::vector<double>& w,
                                            std::size_t configured_bins) {
  const auto points = project(table, w);
  std::array<CellReport, 4> out;
  std::size_t k = 0;
  for (Group g : {Group::major, Group::minor}) {
    for (ClassLabel y : {ClassLabel::negative, ClassLabel::positive}) {
      const auto values = cell_values(points, g, y);
      if (values.empty()) {
        throw std::invalid_argument("gaussianity_suite: cell (" + std::string(to_string(g)) + ", " +
                                    std::to_string(to_int(y)) + ") is empty");
      }
      const std::size_t bins = std::min(configured_bins, values.size() / 5);
      out[k++] = {g, y, chi_square_gof(values, bins)};
    }
  }
  return out;
}

FeatureAudit audit_features(const std::vector<ProjectedPoint>& points, std::size_t bins, double ref) {
  if (points.empty()) throw std::invalid_argument("audit_features: no projected points");
  FeatureAudit audit;
  audit.bins = bins;
  audit.ref = ref;
  const auto [mn, mx] = std::minmax_element(points.begin(), points.end(),
                                            [](const auto& a, const auto& b) { return a.x < b.x; });
  audit.lo = mn->x;
  audit.hi = mx->x;
  if (!(audit.lo < audit.hi)) {
    audit.lo -= 0.5;
    audit.hi += 0.5;
  }
  for (Group g : {Group::major, Group::minor}) {
    GroupAudit& ga = audit.groups[g == Group::major ? 0 : 1];
    ga.group = g;
    const auto v1 = cell_values(points, g, ClassLabel::negative);
    const auto v2 = cell_values(points, g, ClassLabel::positive);
    if (v1.empty() || v2.empty()) {
      throw std::invalid_argument("audit_features: group " + std::string(to_string(g)) +
                                  " is missing a class");
    }
    ga.class1 = build_histogram(v1, bins, audit.lo, audit.hi);
    ga.class2 = build_histogram(v2, bins, audit.lo, audit.hi);
    ga.overlap = weighted_histogram_overlap(ga.class1, ga.class2);
    ga.histogram_intersection = histogram_overlap(ga.class1, ga.class2);
    ga.ideal_threshold = estimate_ideal_threshold(ga.class1, ga.class2, ref);
  }
  audit.domain_gap = std::fabs(audit.groups[1].ideal_threshold - audit.groups[0].ideal_threshold);
  return audit;
}

}  // namespace mime
