#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mime/feature_analysis.hpp"

using namespace mime;

namespace {

std::vector<double> normals(double mu, double sigma, std::size_t n, std::uint64_t seed) {
  RandomStream rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = mu + sigma * rng.normal();
  return v;
}

ProjectedHistogram hist_of(const std::vector<double>& m, double lo, double hi) {
  ProjectedHistogram h;
  const double w = (hi - lo) / static_cast<double>(m.size());
  for (std::size_t i = 0; i <= m.size(); ++i) h.bin_edges.push_back(lo + w * static_cast<double>(i));
  h.masses = m;
  h.sample_count = 100;
  return h;
}

}  // namespace

TEST_CASE("feature csv round trip and errors") {
  std::istringstream in("group,class,f_0,f_1\nmajor,1,0.5,-1\nminor,2,2,3.25\n");
  const FeatureTable t = read_feature_csv(in);
  REQUIRE(t.size() == 2);
  CHECK(t.dim() == 2);
  CHECK(t.rows()[1].group == Group::minor);
  CHECK(t.rows()[1].label == ClassLabel::positive);
  std::ostringstream out;
  write_feature_csv(out, t);
  std::istringstream back(out.str());
  const FeatureTable t2 = read_feature_csv(back);
  CHECK(t2.rows()[0].features == t.rows()[0].features);

  std::istringstream bad_class("group,class,f_0\nmajor,3,1\n");
  CHECK_THROWS_WITH(read_feature_csv(bad_class), doctest::Contains("line 2"));
  std::istringstream ragged("group,class,f_0,f_1\nmajor,1,1\n");
  CHECK_THROWS(read_feature_csv(ragged));
  std::istringstream bad_num("group,class,f_0\nminor,1,abc\n");
  CHECK_THROWS_WITH(read_feature_csv(bad_num), doctest::Contains("line 2"));

  std::istringstream w("1.5\n\n-2\n");
  CHECK(read_weights(w) == std::vector<double>{1.5, -2.0});
  std::istringstream zero("0\n0\n");
  CHECK_THROWS(read_weights(zero));
}

TEST_CASE("projection") {
  const FeatureTable t({{Group::major, ClassLabel::negative, {3.0, 4.0}},
                        {Group::minor, ClassLabel::positive, {-1.0, 2.0}}});
  const auto e0 = project(t, {1.0, 0.0});
  CHECK(e0[0].x == 3.0);
  CHECK(e0[1].x == -1.0);
  const auto w = project(t, {0.5, 1.0});
  const auto w2 = project(t, {1.0, 2.0});
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(w2[i].x == 2 * w[i].x);
  const FeatureTable orth({{Group::major, ClassLabel::negative, {2.0, -1.0}}});
  CHECK(project(orth, {1.0, 2.0})[0].x == 0.0);
  CHECK_THROWS(project(t, {1.0}));
  CHECK_THROWS(project(t, {0.0, 0.0}));
  CHECK(cell_values(e0, Group::minor, ClassLabel::positive) == std::vector<double>{-1.0});
}

TEST_CASE("histograms") {
  const auto single = build_histogram({0.5}, 2, 0.0, 1.0);
  CHECK(single.masses == std::vector<double>{0.0, 1.0});
  const auto low = build_histogram({-3.0, -2.0}, 4, 0.0, 1.0);
  CHECK(low.masses[0] == 1.0);
  const auto top = build_histogram({1.0}, 4, 0.0, 1.0);
  CHECK(top.masses[3] == 1.0);

  RandomStream rng(2);
  std::vector<double> u(1000000);
  for (auto& x : u) x = rng.uniform();
  const auto h = build_histogram(u, 10, 0.0, 1.0);
  for (double m : h.masses) CHECK(std::fabs(m - 0.1) < 0.01);
  CHECK_THROWS(build_histogram({}, 3, 0, 1));
  CHECK_THROWS(build_histogram({0.5}, 3, 1, 1));
}

TEST_CASE("histogram overlap") {
  const auto a = hist_of({0.5, 0.5, 0.0}, 0, 3);
  const auto b = hist_of({0.0, 0.5, 0.5}, 0, 3);
  CHECK(histogram_overlap(a, a) == doctest::Approx(1.0));
  CHECK(histogram_overlap(hist_of({1, 0, 0}, 0, 3), hist_of({0, 0, 1}, 0, 3)) == 0.0);
  CHECK(histogram_overlap(a, b) == doctest::Approx(0.5));
  CHECK_THROWS(histogram_overlap(a, hist_of({0.5, 0.5, 0.0}, 0, 4)));
  // Equal class counts: the class-share weighted form is half the plain one.
  CHECK(weighted_histogram_overlap(a, b) == doctest::Approx(0.25));
}

TEST_CASE("polynomial fit") {
  const std::vector<double> x{-2, -1, 0, 1, 2, 3, 4};
  std::vector<double> y;
  for (double v : x) y.push_back(1 - 2 * v + 0.5 * v * v * v);
  const auto c = polyfit(x, y, 3);
  REQUIRE(c.size() == 4);
  CHECK(c[0] == doctest::Approx(1.0));
  CHECK(c[1] == doctest::Approx(-2.0));
  CHECK(std::fabs(c[2]) < 1e-9);
  CHECK(c[3] == doctest::Approx(0.5));
  CHECK(polyval(c, 1.5) == doctest::Approx(1 - 3 + 0.5 * 3.375));
}

TEST_CASE("threshold and gap estimates") {
  const double step = 10.0 / (kThresholdGridPoints - 1);
  const auto n1 = normals(-1, 1, 100000, 1), n2 = normals(1, 1, 100000, 2);
  const auto h1 = build_histogram(n1, 40, -5, 5), h2 = build_histogram(n2, 40, -5, 5);
  CHECK(std::fabs(estimate_ideal_threshold(h1, h2)) < 0.1);

  std::vector<double> mirrored;
  for (double v : n1) mirrored.push_back(-v);
  const auto hm = build_histogram(mirrored, 40, -5, 5);
  CHECK(std::fabs(estimate_ideal_threshold(h1, hm)) < step);

  auto shifted = [](std::vector<double> v, double c) {
    for (auto& x : v) x += c;
    return v;
  };
  const auto s1 = build_histogram(shifted(n1, 0.5), 40, -4.5, 5.5);
  const auto s2 = build_histogram(shifted(n2, 0.5), 40, -4.5, 5.5);
  CHECK(std::fabs(estimate_ideal_threshold(s1, s2) - estimate_ideal_threshold(h1, h2) - 0.5) <= step);

  const HistogramPair major{h1, h2};
  CHECK(estimate_domain_gap(major, major) == 0.0);
  const HistogramPair moved{build_histogram(shifted(n1, 0.3), 40, -4.7, 5.3),
                            build_histogram(shifted(n2, 0.3), 40, -4.7, 5.3)};
  CHECK(std::fabs(estimate_domain_gap(major, moved) - 0.3) <= 2 * step);
  CHECK_THROWS(estimate_ideal_threshold(hist_of({0.5, 0.5}, 0, 1), hist_of({0.5, 0.5}, 0, 1)));
}

TEST_CASE("chi-square goodness of fit") {
  const auto r15 = chi_square_gof(normals(0, 1, 3000, 4), 15);
  CHECK(r15.dof == 12);
  CHECK(std::fabs(r15.critical_value - 21.03) < 0.01);
  const auto r5 = chi_square_gof(normals(2, 3, 3000, 5), 5);
  CHECK(r5.dof == 2);
  CHECK(std::fabs(r5.critical_value - 5.99) < 0.01);
  CHECK(std::fabs(chi2_critical(12) - 21.0261) < 1e-3);
  CHECK(std::fabs(chi2_critical(2) - 5.9915) < 1e-3);
  CHECK(std::fabs(chi2_critical(1, 0.5) - 0.4549) < 1e-3);
  CHECK_THROWS(chi2_critical(0));

  std::vector<double> bimodal = normals(-4, 0.5, 2000, 6);
  const auto right = normals(4, 0.5, 2000, 7);
  bimodal.insert(bimodal.end(), right.begin(), right.end());
  const auto rb = chi_square_gof(bimodal, 15);
  CHECK(rb.reject_gaussian);
  CHECK(rb.statistic > 10 * rb.critical_value);

  const auto few = chi_square_gof(normals(0, 1, 30, 8), 10);
  CHECK(few.low_count_warning);
  CHECK_THROWS(chi_square_gof(normals(0, 1, 100, 9), 3));
  CHECK_THROWS(chi_square_gof({1.0, 1.0, 1.0, 1.0, 1.0}, 4));
}

TEST_CASE("gaussian cells are rarely rejected") {
  int rejections = 0;
  for (std::uint64_t s = 0; s < 20; ++s) rejections += chi_square_gof(normals(0.3, 0.8, 5000, 100 + s), 15).reject_gaussian;
  CHECK(rejections <= 3);
}
