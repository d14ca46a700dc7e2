#include <doctest.h>

#include <cmath>
#include <limits>

#include "mime/distributions.hpp"
#include "oracles.hpp"

using namespace mime;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

TabulatedDistribution uniform_pm1() { return TabulatedDistribution({{-1.0, 0.5}, {1.0, 0.5}}); }
}  // namespace

TEST_CASE("densities") {
  CHECK(GaussianComponent(0, 1).pdf(0) == doctest::Approx(0.3989422804014327).epsilon(1e-14));
  CHECK(GaussianComponent(2, 1).pdf(2) == GaussianComponent(0, 1).pdf(0));
  CHECK(uniform_pm1().pdf(0.0) == doctest::Approx(0.5));
  CHECK(uniform_pm1().pdf(1.5) == 0.0);
  CHECK(uniform_pm1().pdf(-7.0) == 0.0);
  CHECK(GaussianComponent(0.3, 0.7).log_pdf(1.1) == doctest::Approx(std::log(GaussianComponent(0.3, 0.7).pdf(1.1))));
}

TEST_CASE("cumulative values") {
  CHECK(GaussianComponent(0, 1).cdf(0) == doctest::Approx(0.5));
  CHECK(GaussianComponent(0, 1).cdf(-1) == doctest::Approx(oracle::gauss_mass(0, 1, -kInf, -1)).epsilon(1e-12));
  CHECK(GaussianComponent(0, 1).cdf(-1) == doctest::Approx(0.1586553).epsilon(1e-7));
  CHECK(uniform_pm1().cdf(0.5) == doctest::Approx(0.75));
  CHECK(uniform_pm1().cdf(-3) == 0.0);
  CHECK(uniform_pm1().cdf(3) == 1.0);
}

TEST_CASE("tabulated distribution validates and normalizes") {
  CHECK_THROWS_AS(TabulatedDistribution({{0.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(TabulatedDistribution({{0.0, 1.0}, {0.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(TabulatedDistribution({{0.0, -1.0}, {1.0, 3.0}}), std::invalid_argument);
  CHECK_THROWS_AS(TabulatedDistribution({{0.0, 1.0}, {1.0, 2.0}}), std::invalid_argument);

  const TabulatedDistribution tri({{-2.0, 0.0}, {0.5, 0.4}, {3.0, 0.0}});
  const oracle::PiecewiseLinear ref{{{-2.0, 0.0}, {0.5, 0.4}, {3.0, 0.0}}};
  for (double x : {-1.5, 0.0, 0.5, 1.7, 2.9}) {
    CHECK(tri.cdf(x) == doctest::Approx(ref.mass(-2.0, x)).epsilon(1e-12));
    CHECK(tri.quantile(tri.cdf(x)) == doctest::Approx(x).epsilon(1e-10));
  }
  CHECK(tri.mean() == doctest::Approx(oracle::integrate([&](double x) { return x * ref.pdf(x); }, -2, 3, {0.5})));
}

TEST_CASE("sampling") {
  RandomStream rng(17);
  const GroupModel all_two(GaussianComponent(-1, 1), GaussianComponent(1, 1), 1.0);
  for (int i = 0; i < 1000; ++i) REQUIRE(sample(all_two, rng).y == ClassLabel::positive);

  const GroupModel half = gaussian_group(-1, 1, 1, 0.5);
  int twos = 0;
  for (int i = 0; i < 100000; ++i) twos += sample(half, rng).y == ClassLabel::positive;
  CHECK(std::fabs(twos / 100000.0 - 0.5) < 0.01);

  double s = 0;
  for (int i = 0; i < 100000; ++i) s += sample_class(half, ClassLabel::positive, rng);
  CHECK(std::fabs(s / 100000 - 1.0) < 0.01);

  // Exactly two uniforms per draw.
  RandomStream a(5), b(5);
  sample(half, a);
  b.uniform();
  b.uniform();
  CHECK(a.uniform() == b.uniform());
}

TEST_CASE("ideal threshold") {
  CHECK(ideal_threshold(gaussian_group(-1, 1, 1, 1)) == doctest::Approx(0.0).scale(1));
  CHECK(ideal_threshold(gaussian_group(0, 1, 2, 1)) == doctest::Approx(1.0).epsilon(1e-12));
  const oracle::GaussPair p{0, 0.5, 2, 1.0, 0.5};
  CHECK(std::fabs(ideal_threshold(gaussian_group(0, 0.5, 2, 1.0)) - oracle::ideal_threshold(p)) < 1e-10);
  const oracle::GaussPair q{-1, 0.5, 1, 0.5, 0.7};
  CHECK(std::fabs(ideal_threshold(gaussian_group(-1, 0.5, 1, 0.5, 0.7)) - oracle::ideal_threshold(q)) < 1e-10);
  // Prior so extreme that the weighted densities never cross between the means.
  CHECK_THROWS_AS(ideal_threshold(gaussian_group(-1, 1, 1, 1, 0.999999)), std::domain_error);
}

TEST_CASE("overlap") {
  CHECK(overlap(gaussian_group(-1, 1, 1, 1)) == doctest::Approx(0.1586553).epsilon(1e-7));
  CHECK(overlap(gaussian_group(-1, 1e-3, 1, 1e-3)) < 1e-12);
  CHECK(overlap(gaussian_group(-1, 2, 1, 2)) > overlap(gaussian_group(-1, 1, 1, 1)));
  const oracle::GaussPair p{-0.4, 0.6, 1.3, 1.2, 0.35};
  CHECK(overlap(gaussian_group(-0.4, 0.6, 1.3, 1.2, 0.35)) == doctest::Approx(oracle::overlap(p)).epsilon(1e-10));
}

TEST_CASE("domain gap") {
  const GroupModel g = gaussian_group(-1, 0.5, 1, 0.5);
  CHECK(domain_gap({g, g}) == 0.0);
  CHECK(domain_gap({g, gaussian_group(-0.7, 0.5, 1.3, 0.5)}) == doctest::Approx(0.3));
  const PopulationModel pop{g, gaussian_group(-0.8, 1.0, 1.4, 1.0)};
  const double want =
      oracle::ideal_threshold({-0.8, 1.0, 1.4, 1.0, 0.5}) - oracle::ideal_threshold({-1, 0.5, 1, 0.5, 0.5});
  CHECK(domain_gap(pop) == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("gaussian intersection") {
  const auto one = gaussian_intersection({0, 1}, {2, 1});
  REQUIRE(one.size() == 1);
  CHECK(one[0] == doctest::Approx(1.0));

  for (auto [a, b] : {std::pair{GaussianComponent(0, 1), GaussianComponent(0, 2)},
                      std::pair{GaussianComponent(0, 1), GaussianComponent(3, 0.5)}}) {
    const auto roots = gaussian_intersection(a, b);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] < roots[1]);
    for (double r : roots) CHECK(std::fabs(a.pdf(r) - b.pdf(r)) < 1e-10);
  }
  const auto sym = gaussian_intersection({0, 1}, {0, 2});
  CHECK(sym[0] == doctest::Approx(-sym[1]));
  CHECK_THROWS_AS(gaussian_intersection({1, 1}, {1, 1}), std::invalid_argument);
}

TEST_CASE("signed tail weight") {
  const GroupModel g = gaussian_group(-1, 1, 1, 1);
  CHECK(std::fabs(signed_tail_weight(g, 0.0)) < 1e-15);
  const GroupModel h = gaussian_group(-1, 0.5, 1, 2.0, 0.3);
  CHECK(signed_tail_weight(h, 1e6) == doctest::Approx(0.3));
  const oracle::GaussPair p{-1, 0.5, 1, 0.5, 0.6};
  const double d = oracle::ideal_threshold(p) + 0.1;
  CHECK(signed_tail_weight(gaussian_group(-1, 0.5, 1, 0.5, 0.6), d) ==
        doctest::Approx(oracle::tail_weight(p, d)).epsilon(1e-10));
}

TEST_CASE("f constant") {
  const GroupModel g = gaussian_group(-1, 0.5, 1, 0.5);
  CHECK(theorem2_f({g, g}) == doctest::Approx(1.0));
  const PopulationModel pop{g, gaussian_group(-1, 1, 1, 1)};
  const double f = theorem2_f(pop);
  const double lhs = overlap(pop.major) / overlap(pop.minor);
  const double rhs = pdf(pop.major, ClassLabel::positive, 0.0) / pdf(pop.minor, ClassLabel::positive, 0.0) * f;
  CHECK(std::fabs(lhs - rhs) < 1e-10);
  const PopulationModel scaled{gaussian_group(-2, 1, 2, 1), gaussian_group(-2, 2, 2, 2)};
  CHECK(theorem2_f(scaled) == doctest::Approx(f).epsilon(1e-12));
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(gaussian_group(1, 1, -1, 1), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_group(-1, 1, 1, 1, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(GaussianComponent(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(class_label_from_int(3), std::invalid_argument);
  CHECK(group_from_string("minor") == Group::minor);
  CHECK_THROWS_AS(group_from_string("middle"), std::invalid_argument);
  const auto roles = validate_roles({gaussian_group(-1, 0.5, 1, 0.5), gaussian_group(-1, 1, 1, 1)});
  CHECK(roles.roles_consistent);
  CHECK_FALSE(validate_roles({gaussian_group(-1, 1, 1, 1), gaussian_group(-1, 0.5, 1, 0.5)}).roles_consistent);
}
