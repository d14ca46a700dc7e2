#include "mime/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mime/special_functions.hpp"

namespace mime {

int to_int(ClassLabel label) noexcept { return static_cast<int>(label); }

ClassLabel class_label_from_int(int value) {
  if (value == 1) return ClassLabel::negative;
  if (value == 2) return ClassLabel::positive;
  throw std::invalid_argument("class label must be 1 or 2, got " + std::to_string(value));
}

std::string_view to_string(Group group) noexcept {
  return group == Group::major ? "major" : "minor";
}

Group group_from_string(std::string_view name) {
  if (name == "major") return Group::major;
  if (name == "minor") return Group::minor;
  throw std::invalid_argument("group must be 'major' or 'minor', got '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------

GaussianComponent::GaussianComponent(double mean, double stddev) : mean_(mean), stddev_(stddev) {
  if (!std::isfinite(mean) || !std::isfinite(stddev) || !(stddev > 0.0)) {
    throw std::invalid_argument("GaussianComponent: std must be positive and finite");
  }
}

double GaussianComponent::pdf(double x) const {
  return special::normal_pdf((x - mean_) / stddev_) / stddev_;
}

double GaussianComponent::log_pdf(double x) const {
  const double z = (x - mean_) / stddev_;
  return -0.5 * z * z - std::log(stddev_) - 0.5 * std::log(2.0 * std::numbers::pi);
}

double GaussianComponent::cdf(double x) const { return special::normal_cdf((x - mean_) / stddev_); }

double GaussianComponent::sf(double x) const { return special::normal_sf((x - mean_) / stddev_); }

double GaussianComponent::quantile(double p) const {
  return mean_ + stddev_ * special::normal_quantile(p);
}

// ---------------------------------------------------------------------------

TabulatedDistribution::TabulatedDistribution(std::vector<std::pair<double, double>> points)
    : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw std::invalid_argument("TabulatedDistribution: need at least two grid points");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto [x, p] = points_[i];
    if (!std::isfinite(x) || !std::isfinite(p) || p < 0.0) {
      throw std::invalid_argument("TabulatedDistribution: densities must be finite and >= 0");
    }
    if (i > 0 && !(x > points_[i - 1].first)) {
      throw std::invalid_argument("TabulatedDistribution: x values must be strictly increasing");
    }
  }
  double total = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    total += 0.5 * (points_[i].second + points_[i - 1].second) *
             (points_[i].first - points_[i - 1].first);
  }
  if (std::fabs(total - 1.0) > 1e-6) {
    throw std::invalid_argument("TabulatedDistribution: density integrates to " +
                                std::to_string(total) + ", expected 1 within 1e-6");
  }
  density_.reserve(points_.size());
  for (const auto& pt : points_) density_.push_back(pt.second / total);

  cumulative_.assign(points_.size(), 0.0);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const double x0 = points_[i - 1].first;
    const double x1 = points_[i].first;
    const double h = x1 - x0;
    cumulative_[i] = cumulative_[i - 1] + 0.5 * (density_[i] + density_[i - 1]) * h;
    // Exact first moment of the linear piece.
    const double p0 = density_[i - 1];
    const double p1 = density_[i];
    mean_ += h * (p0 * (2.0 * x0 + x1) + p1 * (x0 + 2.0 * x1)) / 6.0;
  }
  cumulative_.back() = 1.0;
}

double TabulatedDistribution::pdf(double x) const {
  if (x < lower() || x > upper()) return 0.0;
  const auto it = std::upper_bound(points_.begin(), points_.end(), x,
                                   [](double v, const auto& pt) { return v < pt.first; });
  if (it == points_.end()) return density_.back();
  const auto i = static_cast<std::size_t>(it - points_.begin());
  const double x0 = points_[i - 1].first;
  const double t = (x - x0) / (points_[i].first - x0);
  return density_[i - 1] + t * (density_[i] - density_[i - 1]);
}

double TabulatedDistribution::cdf(double x) const {
  if (x <= lower()) return 0.0;
  if (x >= upper()) return 1.0;
  const auto it = std::upper_bound(points_.begin(), points_.end(), x,
                                   [](double v, const auto& pt) { return v < pt.first; });
  const auto i = static_cast<std::size_t>(it - points_.begin());
  const double x0 = points_[i - 1].first;
  const double u = x - x0;
  const double slope = (density_[i] - density_[i - 1]) / (points_[i].first - x0);
  return cumulative_[i - 1] + density_[i - 1] * u + 0.5 * slope * u * u;
}

double TabulatedDistribution::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("TabulatedDistribution::quantile: p must lie in [0, 1]");
  }
  if (p <= 0.0) return lower();
  if (p >= 1.0) return upper();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), p);
  auto i = static_cast<std::size_t>(it - cumulative_.begin());
  i = std::clamp<std::size_t>(i, 1, cumulative_.size() - 1);
  const double x0 = points_[i - 1].first;
  const double h = points_[i].first - x0;
  const double p0 = density_[i - 1];
  const double slope = (density_[i] - p0) / h;
  const double target = p - cumulative_[i - 1];
  // Solve 0.5*slope*u^2 + p0*u = target for u in [0, h].
  // Rationalized root; stays stable as slope -> 0.
  const double denom = p0 + std::sqrt(std::max(0.0, p0 * p0 + 2.0 * slope * target));
  const double u = denom > 0.0 ? 2.0 * target / denom : 0.0;
  return x0 + std::clamp(u, 0.0, h);
}

// ---------------------------------------------------------------------------

double pdf(const ClassDistribution& dist, double x) {
  return std::visit([x](const auto& d) { return d.pdf(x); }, dist);
}
double cdf(const ClassDistribution& dist, double x) {
  return std::visit([x](const auto& d) { return d.cdf(x); }, dist);
}
double sf(const ClassDistribution& dist, double x) {
  return std::visit([x](const auto& d) { return d.sf(x); }, dist);
}
double quantile(const ClassDistribution& dist, double p) {
  return std::visit([p](const auto& d) { return d.quantile(p); }, dist);
}
double mean(const ClassDistribution& dist) {
  return std::visit([](const auto& d) { return d.mean(); }, dist);
}

// ---------------------------------------------------------------------------

GroupModel::GroupModel(ClassDistribution class1, ClassDistribution class2, double prior)
    : class1_(std::move(class1)), class2_(std::move(class2)), prior_(prior) {
  if (!(prior >= 0.0 && prior <= 1.0)) {
    throw std::invalid_argument("GroupModel: prior must lie in [0, 1]");
  }
  if (is_gaussian() && !(mime::mean(class1_) < mime::mean(class2_))) {
    throw std::invalid_argument("GroupModel: class 1 mean must be left of class 2 mean");
  }
}

const ClassDistribution& GroupModel::distribution(ClassLabel label) const noexcept {
  return label == ClassLabel::positive ? class2_ : class1_;
}

bool GroupModel::is_gaussian() const noexcept {
  return std::holds_alternative<GaussianComponent>(class1_) &&
         std::holds_alternative<GaussianComponent>(class2_);
}

GroupModel gaussian_group(double mean1, double std1, double mean2, double std2, double prior) {
  return GroupModel(GaussianComponent(mean1, std1), GaussianComponent(mean2, std2), prior);
}

double pdf(const GroupModel& model, ClassLabel label, double x) {
  return pdf(model.distribution(label), x);
}
double class_cdf(const GroupModel& model, ClassLabel label, double x) {
  return cdf(model.distribution(label), x);
}
double class_sf(const GroupModel& model, ClassLabel label, double x) {
  return sf(model.distribution(label), x);
}
double class_quantile(const GroupModel& model, ClassLabel label, double p) {
  return quantile(model.distribution(label), p);
}

LabeledSample sample(const GroupModel& model, RandomStream& rng) {
  const double u_label = rng.uniform();
  const double u_x = rng.uniform();
  const ClassLabel y = u_label < model.prior() ? ClassLabel::positive : ClassLabel::negative;
  return {class_quantile(model, y, u_x), y};
}

double sample_class(const GroupModel& model, ClassLabel label, RandomStream& rng) {
  return class_quantile(model, label, rng.uniform());
}

namespace {

// g(x) = log(pi p2) - log((1-pi) p1) for Gaussians, else the plain difference.
// Only its sign matters to the bisection.
double crossing_function(const GroupModel& model, double x) {
  const double pi = model.prior();
  if (model.is_gaussian()) {
    const auto& c1 = std::get<GaussianComponent>(model.class1());
    const auto& c2 = std::get<GaussianComponent>(model.class2());
    return (std::log(pi) + c2.log_pdf(x)) - (std::log1p(-pi) + c1.log_pdf(x));
  }
  return pi * pdf(model.class2(), x) - (1.0 - pi) * pdf(model.class1(), x);
}

}  // namespace

double ideal_threshold(const GroupModel& model) {
  double lo = mean(model.class1());
  double hi = mean(model.class2());
  if (!(lo < hi)) {
    throw std::domain_error("ideal_threshold: class means must be distinct and ordered");
  }
  double g_lo = crossing_function(model, lo);
  double g_hi = crossing_function(model, hi);
  if (g_lo == 0.0) return lo;
  if (g_hi == 0.0) return hi;
  if (!(g_lo < 0.0 && g_hi > 0.0)) {
    throw std::domain_error("ideal_threshold: prior-weighted densities do not cross between the means");
  }
  // Bisect to machine resolution; well inside the 1e-10 requirement.
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g = crossing_function(model, mid);
    if (g == 0.0) return mid;
    if (g < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double overlap(const GroupModel& model) {
  const double d = ideal_threshold(model);
  const double pi = model.prior();
  return pi * cdf(model.class2(), d) + (1.0 - pi) * sf(model.class1(), d);
}

double signed_tail_weight(const GroupModel& model, double x) {
  const double pi = model.prior();
  return pi * cdf(model.class2(), x) - (1.0 - pi) * sf(model.class1(), x);
}

double domain_gap(const PopulationModel& pop) {
  return ideal_threshold(pop.minor) - ideal_threshold(pop.major);
}

std::vector<double> gaussian_intersection(const GaussianComponent& a, const GaussianComponent& b) {
  const double m1 = a.mean();
  const double s1 = a.stddev();
  const double m2 = b.mean();
  const double s2 = b.stddev();
  if (m1 == m2 && s1 == s2) {
    throw std::invalid_argument("gaussian_intersection: identical components intersect everywhere");
  }
  if (s1 == s2) return {0.5 * (m1 + m2)};
  // (x-m1)^2/s1^2 - (x-m2)^2/s2^2 = 2 ln(s2/s1)  ->  A x^2 + B x + C = 0
  const double v1 = s1 * s1;
  const double v2 = s2 * s2;
  const double A = 1.0 / v1 - 1.0 / v2;
  const double B = -2.0 * (m1 / v1 - m2 / v2);
  const double C = m1 * m1 / v1 - m2 * m2 / v2 - 2.0 * std::log(s2 / s1);
  const double disc = B * B - 4.0 * A * C;
  if (disc < 0.0) return {};
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (B + std::copysign(sq, B));
  std::vector<double> roots;
  if (q == 0.0) {
    roots = {0.0};
  } else {
    roots = {q / A, C / q};
    if (sq == 0.0) roots.pop_back();
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

double theorem2_f(const PopulationModel& pop) {
  const double d_major = ideal_threshold(pop.major);
  const double d_minor = ideal_threshold(pop.minor);
  const double p2_major = pdf(pop.major.class2(), d_major);
  const double p2_minor = pdf(pop.minor.class2(), d_minor);
  if (!(p2_major > 0.0) || !(p2_minor > 0.0)) {
    throw std::domain_error("theorem2_f: class-2 density vanishes at an ideal threshold");
  }
  return (overlap(pop.major) / overlap(pop.minor)) * p2_minor / p2_major;
}

RoleReport validate_roles(const PopulationModel& pop) {
  RoleReport r;
  r.overlap_major = overlap(pop.major);
  r.overlap_minor = overlap(pop.minor);
  r.roles_consistent = r.overlap_minor >= r.overlap_major;
  return r;
}

}  // namespace mime
