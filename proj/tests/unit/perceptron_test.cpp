#include <doctest.h>

#include <cmath>
#include <vector>

#include "mime/perceptron.hpp"

using namespace mime;

TEST_CASE("prediction and tie-break") {
  CHECK(Perceptron1D(0.0).predict(0.5) == ClassLabel::positive);
  CHECK(Perceptron1D(-0.2).predict(0.1) == ClassLabel::negative);
  CHECK(Perceptron1D(-0.2).predict(0.2) == ClassLabel::negative);  // score exactly 0
  const std::vector<double> x{2.0, -5.0};
  CHECK(PerceptronND({1.0, 0.0, 0.0}, 0.1).predict(x) == ClassLabel::positive);
}

TEST_CASE("1D update rule") {
  Perceptron1D p(-0.2, 0.01);
  CHECK(p.update(0.3, ClassLabel::negative));
  CHECK(p.bias() == doctest::Approx(-0.21));
  Perceptron1D q(-0.2, 0.01);
  CHECK_FALSE(q.update(0.1, ClassLabel::negative));
  CHECK(q.bias() == -0.2);
  Perceptron1D r(0.5, 0.25);
  CHECK(r.update(-1.0, ClassLabel::positive));
  CHECK(r.bias() == doctest::Approx(0.75));
}

TEST_CASE("N-D update rule") {
  PerceptronND p({1.0, 0.0}, 0.1);
  const std::vector<double> x{-2.0};
  CHECK(p.update(x, ClassLabel::positive));
  CHECK(p.weights()[0] == doctest::Approx(0.8));
  CHECK(p.weights()[1] == doctest::Approx(0.1));
  const std::vector<double> bad{1.0, 2.0};
  CHECK_THROWS_AS(p.score(bad), std::invalid_argument);
  CHECK(PerceptronND::with_unit_direction(3, 0.1).weights() == std::vector<double>{1.0, 0.0, 0.0, 0.0});
}

TEST_CASE("threshold is the negated bias") {
  CHECK(Perceptron1D(0.0).threshold() == 0.0);
  CHECK(Perceptron1D(0.25).threshold() == -0.25);
  CHECK(Perceptron1D(-1.5).threshold() == 1.5);
}

TEST_CASE("constructor and schedule validation") {
  CHECK_THROWS_AS(Perceptron1D(0.0, -0.1), std::invalid_argument);
  CHECK_NOTHROW(Perceptron1D(0.0, 0.0));
  CHECK_THROWS_AS(PerceptronND({1.0}, 0.1), std::invalid_argument);
  CHECK_THROWS_AS((TrainingSchedule{0, 1, true}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((TrainingSchedule{1, 0, true}.validate()), std::invalid_argument);
}

TEST_CASE("training") {
  RandomStream rng(1);
  SUBCASE("already correct data leaves the model alone") {
    const std::vector<LabeledSample> data{{-1.0, ClassLabel::negative}, {1.0, ClassLabel::positive}};
    Perceptron1D p(0.0, 0.1);
    const auto hist = train(p, data, TrainingSchedule{5, 1, true}, rng);
    CHECK(p.bias() == 0.0);
    CHECK(hist.size() == 5);
    for (const auto& h : hist) CHECK(h.updates == 0);
  }
  SUBCASE("hand trace of a persistently misclassified sample") {
    const std::vector<LabeledSample> data{{1.0, ClassLabel::negative}};
    Perceptron1D p(0.0, 0.1);
    const auto hist = train(p, data, TrainingSchedule{3, 1, false}, rng);
    REQUIRE(hist.size() == 3);
    CHECK(hist[0].parameters[0] == doctest::Approx(-0.1));
    CHECK(hist[1].parameters[0] == doctest::Approx(-0.2));
    CHECK(hist[2].parameters[0] == doctest::Approx(-0.3));
    CHECK(hist[2].train_error == 1.0);
  }
  SUBCASE("separable data reaches zero training error") {
    std::vector<LabeledSample> data;
    RandomStream gen(9);
    for (int i = 0; i < 1000; ++i) {
      const double x = 0.5 + 2.0 * gen.uniform();
      data.push_back({i % 2 ? x + 0.3 : -x + 0.3, i % 2 ? ClassLabel::positive : ClassLabel::negative});
    }
    Perceptron1D p(0.0, 0.05);
    const auto hist = train(p, data, TrainingSchedule{20, 4, true}, rng);
    CHECK(hist.back().train_error == 0.0);
  }
  SUBCASE("same seed, same history; callbacks see every epoch") {
    std::vector<LabeledSample> data;
    RandomStream gen(10);
    for (int i = 0; i < 200; ++i) {
      const bool pos = gen.uniform() < 0.5;
      data.push_back({(pos ? 1.0 : -1.0) + gen.normal(), pos ? ClassLabel::positive : ClassLabel::negative});
    }
    Perceptron1D a(0.3, 0.02), b(0.3, 0.02);
    RandomStream ra(77), rb(77);
    int calls = 0;
    const auto ha = train(a, data, TrainingSchedule{4, 3, true}, ra, [&](const Perceptron1D&, const EpochRecord&) { ++calls; });
    const auto hb = train(b, data, TrainingSchedule{4, 3, true}, rb);
    CHECK(calls == 4);
    CHECK(a == b);
    for (std::size_t i = 0; i < ha.size(); ++i) CHECK(ha[i].parameters == hb[i].parameters);
  }
  SUBCASE("N-D training on separable data") {
    std::vector<VectorSample> data;
    RandomStream gen(11);
    for (int i = 0; i < 400; ++i) {
      const double u = gen.normal(), v = gen.normal();
      if (std::abs(u + v) < 0.2) continue;
      data.push_back({{u, v}, u + v > 0 ? ClassLabel::positive : ClassLabel::negative});
    }
    auto p = PerceptronND::with_unit_direction(2, 0.1);
    const auto hist = train(p, data, TrainingSchedule{50, 1, true}, rng);
    CHECK(hist.back().train_error == 0.0);
  }
  Perceptron1D untouched;
  CHECK_THROWS_AS(train(untouched, std::vector<LabeledSample>{}, TrainingSchedule{}, rng), std::invalid_argument);
}
