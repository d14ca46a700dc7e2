#include <doctest.h>

#include <cmath>
#include <limits>

#include "mime/theory.hpp"
#include "oracles.hpp"

using namespace mime;

namespace {
const GroupModel kMajor = gaussian_group(-1, 0.5, 1, 0.5);
const GroupModel kMinor = gaussian_group(-1, 1.0, 1, 1.0);
const DisplacementSpec kRight{0.1, Side::positive_class};
}  // namespace

TEST_CASE("exact expected update") {
  CHECK(std::fabs(expected_update_exact(kMinor, 0.0)) < 1e-15);
  CHECK(expected_update_exact(gaussian_group(-1, 1, 1, 1, 0.7), 100.0) == doctest::Approx(0.7));

  // At d_ideal + D on a symmetric prior-0.5 group the tails reduce to the
  // class-2 mass over [d - D, d + D] at weight 0.5.
  const double D = 0.3;
  const double reduced = 0.5 * oracle::gauss_mass(1.0, 1.0, -D, D);
  CHECK(std::fabs(expected_update_exact(kMinor, D) - reduced) < 1e-9);
}

TEST_CASE("first-order expected update") {
  CHECK(expected_update_small_delta(kMinor, 0.0, 0.0) == 0.0);
  const double p2 = oracle::gauss_pdf(1.0, 1.0, 0.0);
  CHECK(expected_update_small_delta(kMinor, 0.01, 0.0) == doctest::Approx(2 * 0.5 * p2 * 0.01).epsilon(1e-14));
  CHECK(expected_update_small_delta(kMinor, 0.01, 0.0) ==
        doctest::Approx(expected_update_exact(kMinor, 0.01)).epsilon(1e-4));
  CHECK_THROWS_AS(expected_update_small_delta(kMinor, 0.01, 0.02), std::invalid_argument);
  CHECK_THROWS_AS(expected_update_small_delta(gaussian_group(-1, 1, 1, 1, 0.6), 0.01, 0.0), std::invalid_argument);
  CHECK(small_delta_relative_error(kMinor, 0.01, Side::negative_class) < 1e-4);
}

TEST_CASE("displacement spec") {
  CHECK_THROWS_AS((DisplacementSpec{0.0, Side::positive_class}.validate()), std::invalid_argument);
  CHECK(side_from_string("negative-class") == Side::negative_class);
  CHECK(to_string(Side::positive_class) == "positive-class");
  CHECK_THROWS_AS(side_from_string("left"), std::invalid_argument);
}

TEST_CASE("theorem 1") {
  const auto v = check_theorem1({kMajor, kMinor}, kRight);
  CHECK(v.holds);
  CHECK(v.quantities.at("p2_minor_at_ideal") == doctest::Approx(oracle::gauss_pdf(1, 1, 0)));
  CHECK(v.quantities.at("p2_major_at_ideal") == doctest::Approx(oracle::gauss_pdf(1, 0.5, 0)));

  CHECK_FALSE(check_theorem1({kMajor, kMajor}, kRight).holds);

  const auto flat = check_theorem1({kMajor, gaussian_group(-1, 10, 1, 10)}, kRight);
  CHECK(flat.quantities.at("p2_minor_at_ideal") < flat.quantities.at("p2_major_at_ideal"));
  CHECK_FALSE(flat.holds);

  CHECK_FALSE(check_theorem1({kMajor, gaussian_group(-0.9, 1, 1.1, 1)}, kRight).holds);
  CHECK_THROWS_AS(check_theorem1({gaussian_group(-1, 0.5, 1, 0.5, 0.6), kMinor}, kRight), std::invalid_argument);
}

TEST_CASE("theorem 2") {
  SUBCASE("zero gap reduces to theorem 1") {
    const auto v2 = check_theorem2({kMajor, kMinor}, kRight);
    const auto v1 = check_theorem1({kMajor, kMinor}, kRight);
    CHECK(v2.theorem == Theorem::T2);
    CHECK(v2.holds == v1.holds);
    CHECK(v2.quantities.count("f") == 1);
  }
  SUBCASE("case 2, gap towards the displaced side") {
    const PopulationModel pop{kMajor, gaussian_group(-0.95, 1, 1.05, 1)};
    const auto v = check_theorem2(pop, DisplacementSpec{0.2, Side::positive_class});
    REQUIRE(v.theorem_case);
    CHECK(*v.theorem_case == TheoremCase::case2);
    const double ratio = oracle::gauss_pdf(1, 0.5, 0) / oracle::gauss_pdf(1.05, 1, 0.05);
    CHECK(v.quantities.at("density_ratio") == doctest::Approx(ratio).epsilon(1e-10));
    CHECK(v.quantities.at("ratio_bound") == doctest::Approx(0.75));
    CHECK(ratio < 0.75);
    // Holds requires the density condition and the first-order regime.
    CHECK(v.holds == (v.quantities.at("small_displacement_premise") == 1.0));

    const auto small = check_theorem2(pop, DisplacementSpec{0.1, Side::positive_class});
    CHECK(small.quantities.at("ratio_bound") == doctest::Approx(0.5));
    CHECK(small.holds);
  }
  SUBCASE("gap nearly equal to the displacement") {
    const PopulationModel pop{kMajor, gaussian_group(-0.81, 1, 1.19, 1)};
    const auto v = check_theorem2(pop, DisplacementSpec{0.2, Side::positive_class});
    CHECK(v.quantities.at("ratio_bound") == doctest::Approx(0.05));
    CHECK_FALSE(v.holds);
  }
  SUBCASE("case 1, gap away from the displaced side") {
    const PopulationModel pop{kMajor, gaussian_group(-1.05, 1, 0.95, 1)};
    const auto v = check_theorem2(pop, kRight);
    REQUIRE(v.theorem_case);
    CHECK(*v.theorem_case == TheoremCase::case1);
    CHECK(v.holds);
    const auto mirrored = check_theorem2(pop, DisplacementSpec{0.1, Side::negative_class});
    CHECK(*mirrored.theorem_case == TheoremCase::case2);
  }
  CHECK_THROWS_AS(check_theorem2({kMajor, gaussian_group(-0.7, 1, 1.3, 1)}, kRight), std::invalid_argument);
}

TEST_CASE("theorem 3") {
  CHECK_FALSE(check_theorem3({kMajor, kMajor}, kRight, false).holds);
  const auto id = check_theorem3({kMajor, kMajor}, kRight, false);
  CHECK(id.quantities.at("min_minor") == id.quantities.at("max_major"));

  const DisplacementSpec small{0.02, Side::positive_class};
  CHECK(check_theorem3({kMajor, kMinor}, small, false).holds == check_theorem1({kMajor, kMinor}, small).holds);
  CHECK(check_theorem3({kMajor, kMinor}, small, false).holds);

  const PopulationModel gap{kMajor, gaussian_group(-0.9, 1, 1.1, 1)};
  CHECK_THROWS_AS(check_theorem3(gap, kRight, false), std::invalid_argument);
  CHECK_NOTHROW(check_theorem3(gap, kRight, true));

  // Asymmetric tabulated minority at unequal priors, against direct quadrature.
  const PopulationModel tab{
      gaussian_group(-1, 0.5, 1, 0.5, 0.6),
      GroupModel(TabulatedDistribution({{-3.0, 0.0}, {-1.0, 0.4}, {2.0, 0.0}}),
                 TabulatedDistribution({{-2.0, 0.0}, {1.0, 0.4}, {3.0, 0.0}}), 0.4)};
  const oracle::PiecewiseLinear c1{{{-3.0, 0.0}, {-1.0, 0.4}, {2.0, 0.0}}};
  const oracle::PiecewiseLinear c2{{{-2.0, 0.0}, {1.0, 0.4}, {3.0, 0.0}}};
  const oracle::GaussPair major{-1, 0.5, 1, 0.5, 0.6};
  const double d = oracle::ideal_threshold(major);
  auto t_minor = [&](double x) { return 0.4 * c2.mass(-9, x) - 0.6 * c1.mass(x, 9); };
  const double lhs = std::min(t_minor(d + 0.1), -t_minor(d - 0.1));
  const double rhs = std::max(oracle::tail_weight(major, d + 0.1), -oracle::tail_weight(major, d - 0.1));
  const auto v = check_theorem3(tab, kRight, true);
  CHECK(v.quantities.at("min_minor") == doctest::Approx(lhs).epsilon(1e-9));
  CHECK(v.quantities.at("max_major") == doctest::Approx(rhs).epsilon(1e-9));
  CHECK(v.holds == (lhs > rhs));
}

TEST_CASE("Monte Carlo hyperplane estimate") {
  const PopulationModel pop{kMajor, kMinor};
  SUBCASE("no learning keeps the initial threshold") {
    HyperplaneMcConfig cfg;
    cfg.K = 2;
    cfg.trials = 1;
    cfg.learning_rate = 0.0;
    cfg.initial_displacement = DisplacementSpec{0.3, Side::negative_class};
    const auto e = mc_expected_hyperplane(pop, Group::minor, cfg);
    CHECK(e.mean_d == doctest::Approx(-0.3));
    CHECK(e.mean_abs_error == doctest::Approx(0.3));
  }
  SUBCASE("same config, same numbers, any job count") {
    HyperplaneMcConfig cfg;
    cfg.trials = 3000;
    cfg.master_seed = 12;
    cfg.initial_displacement = kRight;
    cfg.jobs = 1;
    const auto a = mc_paired_hyperplane(pop, cfg);
    cfg.jobs = 4;
    const auto b = mc_paired_hyperplane(pop, cfg);
    CHECK(a.mean_difference == b.mean_difference);
    CHECK(a.z_score == b.z_score);
    CHECK(a.major.mean_d == b.major.mean_d);
    const auto single = mc_expected_hyperplane(pop, Group::major, cfg);
    CHECK(single.mean_abs_error == a.major.mean_abs_error);
  }
  SUBCASE("multi-epoch path runs and counts trials") {
    HyperplaneMcConfig cfg;
    cfg.trials = 200;
    cfg.K = 11;
    cfg.schedule = TrainingSchedule{3, 2, true};
    const auto e = mc_expected_hyperplane(pop, Group::minor, cfg);
    CHECK(e.trials == 200);
    CHECK(std::isfinite(e.std_error));
  }
  HyperplaneMcConfig bad;
  bad.K = 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
