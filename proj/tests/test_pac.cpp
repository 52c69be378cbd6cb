#include "oiglab/pac.hpp"
#include "oiglab/errors.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace oiglab;
using oracle::Row;

namespace {

Example ex(int x, int y) { return Example{Point{Rational(x)}, Label(y)}; }

// Knows the target and always answers correctly.
class TargetLearner final : public TransductiveLearner {
 public:
  explicit TargetLearner(std::function<Label(const Point&)> target) : target_(std::move(target)) {}
  Label predict(const Scenario& s) const override { return target_(s.points[s.observed.hole()]); }
  std::string name() const override { return "target"; }

 private:
  std::function<Label(const Point&)> target_;
};

// Predicts the label of the latest observed point, or 0.
class LastSeenLearner final : public TransductiveLearner {
 public:
  Label predict(const Scenario& s) const override {
    for (std::size_t j = s.observed.size(); j-- > 0;) {
      if (j != s.observed.hole()) return s.observed.at(j);
    }
    return Label(0);
  }
  std::string name() const override { return "last"; }
};

Label threshold_target(const Point& x) { return Label(x[0] >= Rational(4) ? 1 : 0); }

FiniteDistribution threshold_distribution() {
  std::vector<Example> support;
  for (int x = 1; x <= 6; ++x) support.push_back(ex(x, x >= 4 ? 1 : 0));
  return FiniteDistribution::uniform(support);
}

FiniteDistribution grid_distribution() {
  std::vector<Example> support;
  for (int x = 0; x < 5; ++x) {
    for (int y = 0; y < 5; ++y) {
      const bool inside = 1 <= x && x <= 3 && 1 <= y && y <= 2;
      support.push_back(Example{Point{Rational(x), Rational(y)}, Label(inside ? 1 : 0)});
    }
  }
  return FiniteDistribution::uniform(support);
}

Rational standard_error_slack(double p, std::size_t trials) {
  const double se = std::sqrt(p * (1 - p) / static_cast<double>(trials));
  // Round the slack up to a multiple of 1/10000 so the comparison stays exact.
  return Rational(static_cast<std::int64_t>(std::ceil(3 * se * 10000)), 10000);
}

}  // namespace

TEST_SUITE("pac") {

TEST_CASE("finite distributions validate their weights") {
  CHECK_THROWS(FiniteDistribution({}, {}));
  CHECK_THROWS(FiniteDistribution({ex(1, 0)}, {Rational(1, 2)}));
  CHECK_THROWS(FiniteDistribution({ex(1, 0), ex(2, 0)}, {Rational(3, 2), Rational(-1, 2)}));
  CHECK_THROWS(FiniteDistribution({ex(1, 0)}, {Rational(1), Rational(0)}));
  const FiniteDistribution d({ex(1, 0), ex(1, 1), ex(2, 0)}, {Rational(1, 4), Rational(1, 4), Rational(1, 2)});
  CHECK(d.support_points().size() == 2);
}

TEST_CASE("sampling follows the weights") {
  const FiniteDistribution d({ex(0, 0), ex(1, 0)}, {Rational(1, 4), Rational(3, 4)});
  Rng rng = stream_generator(3, 0);
  const auto draws = d.sample(rng, 20000);
  const auto ones = std::count_if(draws.begin(), draws.end(), [](const Example& e) { return e.x[0] == Rational(1); });
  CHECK(std::abs(static_cast<double>(ones) / 20000.0 - 0.75) < 0.02);
  Rng a = stream_generator(5, 9), b = stream_generator(5, 9);
  CHECK(d.sample(a, 50) == d.sample(b, 50));
}

TEST_CASE("true loss") {
  const auto dist = threshold_distribution();
  CHECK(true_loss(threshold_target, dist, LossFunction::zero_one()) == Rational(0));
  const auto coin = FiniteDistribution::uniform({ex(1, 0), ex(1, 1)});
  CHECK(true_loss([](const Point&) { return Label(0); }, coin, LossFunction::zero_one()) == Rational(1, 2));
  CHECK(true_loss([](const Point&) { return Label(1); }, coin, LossFunction::zero_one()) == Rational(1, 2));

  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t k = 1 + rng() % 6;
    std::vector<Example> support;
    std::vector<std::int64_t> raw;
    for (std::size_t i = 0; i < k; ++i) {
      support.push_back(ex(static_cast<int>(rng() % 4), static_cast<int>(rng() % 3)));
      raw.push_back(static_cast<std::int64_t>(1 + rng() % 5));
    }
    const auto total = std::accumulate(raw.begin(), raw.end(), std::int64_t{0});
    std::vector<Rational> w;
    for (auto r : raw) w.emplace_back(r, total);
    const std::vector<int> table{2, 0, 1, 1};
    const auto f = [&](const Point& x) { return Label(table[static_cast<std::size_t>(x[0].numerator())]); };
    Rational expect(0);
    for (std::size_t i = 0; i < k; ++i) {
      const auto pred = table[static_cast<std::size_t>(support[i].x[0].numerator())];
      expect += w[i] * Rational(std::abs(pred - static_cast<int>(support[i].y.value().numerator())));
    }
    CHECK(true_loss(f, FiniteDistribution(support, w), LossFunction::absolute()) == expect);
  }
}

TEST_CASE("best in class true loss") {
  Thresholds th;
  CHECK(best_in_class_true_loss(th, threshold_distribution(), LossFunction::zero_one()) == Rational(0));
  // A non-monotone labeling costs one point out of three.
  const auto d = FiniteDistribution::uniform({ex(1, 1), ex(2, 0), ex(3, 1)});
  CHECK(best_in_class_true_loss(th, d, LossFunction::zero_one()) == Rational(1, 3));
}

TEST_CASE("pac to transductive") {
  const auto pts = oracle::line_points({1, 2, 3, 4});
  SUBCASE("a constant learner stays constant") {
    const auto t = pac_to_transductive(constant_pac_learner(Label(1)), 3);
    for (const auto& y : oracle::cube(2, 4)) {
      for (std::size_t i = 0; i < 4; ++i) {
        CHECK(t->predict(Scenario{pts, mask(oracle::labeling(y), i), std::nullopt}) == Label(1));
      }
    }
    CHECK(t->name() == "p2t(constant(1))");
  }
  SUBCASE("nearest neighbor on thresholds") {
    const auto t = pac_to_transductive(nearest_neighbor_pac_learner(oracle::labels(2)), 1);
    const auto err = transductive_error(*t, pts, oracle::labeling({0, 0, 1, 1}), LossFunction::zero_one());
    CHECK(err >= Rational(0));
    CHECK(err <= Rational(1));
    CHECK(err == transductive_error(*t, pts, oracle::labeling({0, 0, 1, 1}), LossFunction::zero_one()));
  }
  SUBCASE("one point trains on nothing") {
    const auto t = pac_to_transductive(nearest_neighbor_pac_learner(oracle::labels(2)), 1);
    const auto one = oracle::line_points({5});
    CHECK(t->predict(Scenario{one, mask(oracle::labeling({1}), 0), std::nullopt}) == Label(0));
  }
}

TEST_CASE("reduction configuration") {
  ReductionConfig c;
  c.block_size = 5;
  c.delta = Rational(1, 10);
  c.holdout_eps = Rational(1, 6);
  CHECK(c.repetitions() == 19);
  CHECK(c.holdout_size() == 126);
  CHECK(c.required_samples() == 221);
  c.repetitions_override = 1;
  c.holdout_override = 0;
  CHECK(c.required_samples() == 5);
}

TEST_CASE("transductive to pac") {
  SUBCASE("one block and no holdout is the curried learner") {
    ReductionConfig c;
    c.block_size = 3;
    c.repetitions_override = 1;
    c.holdout_override = 0;
    const auto inner = std::make_shared<LastSeenLearner>();
    const auto pac = transductive_to_pac(inner, c);
    const std::vector<Example> samples{ex(1, 0), ex(5, 1), ex(2, 0)};
    const auto f = pac->train(samples);
    for (int x = 0; x < 7; ++x) {
      const std::vector<Point> pts{samples[0].x, samples[1].x, samples[2].x, Point{Rational(x)}};
      const PartialLabeling obs(Labeling{Label(0), Label(1), Label(0), Label(0)}, 3);
      CHECK(f(Point{Rational(x)}) == inner->predict(Scenario{pts, obs, std::nullopt}));
    }
    CHECK(pac->name() == "t2p(last)");
  }
  SUBCASE("a perfect transductive learner gives zero loss") {
    ReductionConfig c;
    c.block_size = 5;
    c.holdout_eps = Rational(1, 4);
    const auto pac = transductive_to_pac(std::make_shared<TargetLearner>(threshold_target), c);
    const auto dist = threshold_distribution();
    Rng rng = stream_generator(1, 0);
    const auto f = pac->train(dist.sample(rng, c.required_samples()));
    CHECK(true_loss(f, dist, LossFunction::zero_one()) == Rational(0));
  }
  SUBCASE("too few samples") {
    ReductionConfig c;
    c.block_size = 5;
    const auto pac = transductive_to_pac(std::make_shared<LastSeenLearner>(), c);
    const std::vector<Example> few{ex(1, 0)};
    CHECK_THROWS(pac->train(few));
  }
}

TEST_CASE("pac error estimate") {
  SUBCASE("perfect predictor") {
    std::vector<Example> support;
    for (int x = 0; x < 4; ++x) support.push_back(ex(x, 1));
    const auto est = pac_error_estimate(*constant_pac_learner(Label(1)), FiniteDistribution::uniform(support), 5,
                                        50, 1, Setting::realizable, LossFunction::zero_one());
    CHECK(est.mean == Rational(0));
    CHECK(est.quantile(Rational(1)) == Rational(0));
  }
  SUBCASE("constant against a fair coin") {
    const auto coin = FiniteDistribution::uniform({ex(1, 0), ex(1, 1)});
    const auto est = pac_error_estimate(*constant_pac_learner(Label(0)), coin, 3, 40, 2, Setting::realizable,
                                        LossFunction::zero_one());
    for (const auto& l : est.per_trial) CHECK(l == Rational(1, 2));
  }
  SUBCASE("agnostic subtracts the best hypothesis") {
    Thresholds th;
    const auto d = FiniteDistribution::uniform({ex(1, 1), ex(2, 0), ex(3, 1)});
    const auto est = pac_error_estimate(*constant_pac_learner(Label(1)), d, 3, 10, 3, Setting::agnostic,
                                        LossFunction::zero_one(), &th);
    for (const auto& l : est.per_trial) CHECK(l == Rational(0));
    CHECK_THROWS(pac_error_estimate(*constant_pac_learner(Label(1)), d, 3, 10, 3, Setting::agnostic,
                                    LossFunction::zero_one()));
  }
  SUBCASE("quantiles and exceedance") {
    PacEstimate e;
    for (int k : {3, 1, 4, 1, 5}) e.per_trial.emplace_back(k, 10);
    e.sorted = e.per_trial;
    std::sort(e.sorted.begin(), e.sorted.end());
    CHECK(e.quantile(Rational(1, 2)) == Rational(3, 10));
    CHECK(e.quantile(Rational(1)) == Rational(1, 2));
    CHECK(e.quantile(Rational(1, 5)) == Rational(1, 10));
    CHECK(e.exceedance(Rational(3, 10)) == Rational(2, 5));
    CHECK_THROWS(e.quantile(Rational(0)));
  }
}

TEST_CASE("min rectangle pac learner on a grid") {
  const auto est = pac_error_estimate(*min_rectangle_pac_learner(2), grid_distribution(), 40, 2000, 1,
                                      Setting::realizable, LossFunction::zero_one());
  CHECK(est.quantile(Rational(95, 100)) <= Rational(1, 4));
  // Losses only come from target points left outside the learned box.
  CHECK(est.sorted.back() <= Rational(6, 25));
}

TEST_CASE("monte carlo runs are reproducible and obey markov") {
  const auto dist = threshold_distribution();
  const auto pac = nearest_neighbor_pac_learner(oracle::labels(2));
  const auto a = pac_error_estimate(*pac, dist, 4, 1000, 9, Setting::realizable, LossFunction::zero_one());
  const auto b = pac_error_estimate(*pac, dist, 4, 1000, 9, Setting::realizable, LossFunction::zero_one());
  CHECK(a.per_trial == b.per_trial);
  const auto freq = a.exceedance(a.mean * Rational(2));
  CHECK(freq <= Rational(1, 2) + standard_error_slack(0.5, 1000));

  const auto c = pac_error_estimate(*min_rectangle_pac_learner(2), grid_distribution(), 10, 1000, 4,
                                    Setting::realizable, LossFunction::zero_one());
  CHECK(c.exceedance(c.mean * Rational(2)) <= Rational(1, 2) + standard_error_slack(0.5, 1000));
}

TEST_CASE("leave one out reproduces the transductive error") {
  std::mt19937_64 rng(62);
  AxisAlignedRectangles rect(2);
  const auto minrect = min_rectangle_learner(2);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + rng() % 4;
    std::vector<Point> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back(Point{Rational(static_cast<std::int64_t>(rng() % 4)), Rational(static_cast<std::int64_t>(rng() % 4))});
    const auto h = restriction(rect, pts);
    const auto& y = h[rng() % h.size()];
    const Dataset data(pts, y);
    CHECK(leave_one_out_error(*minrect, data, LossFunction::zero_one()) ==
          transductive_error(*minrect, pts, y, LossFunction::zero_one()));
  }
  auto th = std::make_shared<Thresholds>();
  const auto erm = erm_learner(th, {}, LossFunction::zero_one());
  const Dataset data(oracle::line_points({3, 1, 4, 2, 5}), oracle::labeling({1, 0, 1, 0, 1}));
  CHECK(leave_one_out_error(*erm, data, LossFunction::zero_one()) ==
        transductive_error(*erm, data.points, data.labels, LossFunction::zero_one()));
  std::vector<int> nine(9, 1);
  CHECK_THROWS_AS(leave_one_out_error(*erm, Dataset(oracle::line_points(nine), oracle::labeling(Row(9, 0))),
                                      LossFunction::zero_one()),
                  BudgetExceeded);
}

}  // TEST_SUITE
