#include "oiglab/core.hpp"
#include "oiglab/errors.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

using namespace oiglab;
using oracle::Row;

namespace {

std::set<Row> as_rows(const std::vector<Labeling>& ys) {
  std::set<Row> out;
  for (const auto& y : ys) {
    Row r;
    for (const auto& l : y) r.push_back(static_cast<int>(l.value().numerator()));
    out.insert(r);
  }
  return out;
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("rationals parse and print exactly") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-6/8") == Rational(-3, 4));
  CHECK(parse_rational("0.1") == Rational(1, 10));
  CHECK(parse_rational("2") == Rational(2));
  CHECK(to_string(Rational(2, 6)) == "1/3");
  CHECK(to_string(Rational(4)) == "4");
  CHECK(ceil_of(Rational(7, 3)) == 3);
  CHECK(floor_of(Rational(-7, 3)) == -3);
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
}

TEST_CASE("labels order by value and accept sign aliases") {
  CHECK(Label::parse("+") == Label(1));
  CHECK(Label::parse("-") == Label(0));
  CHECK(Label(0) < Label(1));
  CHECK(Label(Rational(1, 2)) < Label(1));
}

TEST_CASE("partial labelings mask one coordinate") {
  const auto y = oracle::labeling({1, 0, 1});
  const auto p = mask(y, 1);
  CHECK(p.hole() == 1);
  CHECK(p.complete(Label(0)) == y);
  CHECK(p.consistent_with(y));
  CHECK_FALSE(p.consistent_with(oracle::labeling({0, 0, 1})));
  CHECK(p.consistent_with(oracle::labeling({1, 1, 1})));
  CHECK_THROWS_AS(mask(y, 3), std::out_of_range);
}

TEST_CASE("thresholds on three points give four labelings") {
  Thresholds family;
  const auto pts = oracle::line_points({1, 2, 3});
  const auto h = restriction(family, pts);
  CHECK(h == oracle::labelings({{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {1, 1, 1}}));
}

TEST_CASE("thresholds agree with enumeration of cut positions") {
  std::mt19937_64 rng(11);
  Thresholds family;
  for (int trial = 0; trial < 40; ++trial) {
    std::uniform_int_distribution<int> coord(-3, 3);
    std::vector<Rational> xs;
    const int n = 1 + trial % 7;
    for (int i = 0; i < n; ++i) xs.emplace_back(coord(rng), 1 + trial % 3);
    std::vector<Point> pts;
    for (const auto& x : xs) pts.push_back(Point{x});
    CHECK(as_rows(restriction(family, pts)) == oracle::thresholds(xs));
  }
}

TEST_CASE("restriction is sorted and deduplicated") {
  Thresholds family;
  const auto pts = oracle::line_points({3, 1, 3, 2});
  const auto h = restriction(family, pts);
  CHECK(std::is_sorted(h.begin(), h.end()));
  CHECK(std::adjacent_find(h.begin(), h.end()) == h.end());
  // The repeated point is a separate coordinate that always agrees with its twin.
  for (const auto& y : h) CHECK(y[0] == y[2]);
}

TEST_CASE("single hypothesis gives a single labeling") {
  ExplicitTable t(oracle::line_points({1, 2}), oracle::labels(2), oracle::labelings({{1, 0}}));
  CHECK(restriction(t, oracle::line_points({2, 1})) == oracle::labelings({{0, 1}}));
}

TEST_CASE("rectangles on three non-collinear points") {
  AxisAlignedRectangles family(2);
  const auto pts = oracle::plane_points({{0, 0}, {2, 1}, {1, 3}});
  const auto h = as_rows(restriction(family, pts));
  CHECK(h == oracle::rectangles(pts));
  // No point lies in the box of the other two, so every sign vector occurs.
  CHECK(h.size() == 8);
}

TEST_CASE("rectangles agree with corner enumeration on random point sets") {
  std::mt19937_64 rng(5);
  for (std::size_t d = 1; d <= 2; ++d) {
    AxisAlignedRectangles family(d);
    for (int trial = 0; trial < 60; ++trial) {
      std::uniform_int_distribution<int> coord(0, 3);
      std::vector<Point> pts;
      const int n = 1 + trial % 6;
      for (int i = 0; i < n; ++i) {
        Point p;
        for (std::size_t k = 0; k < d; ++k) p.emplace_back(coord(rng));
        pts.push_back(p);
      }
      CHECK(as_rows(restriction(family, pts)) == oracle::rectangles(pts));
    }
  }
}

TEST_CASE("rectangle boundary points count as inside") {
  AxisAlignedRectangles family(2);
  const auto pts = oracle::plane_points({{0, 0}, {2, 2}, {2, 1}});
  const auto h = as_rows(restriction(family, pts));
  CHECK(h.count({1, 1, 1}) == 1);
  CHECK(h.count({1, 1, 0}) == 0);
}

TEST_CASE("restriction budget is enforced") {
  AxisAlignedRectangles family(2);
  std::vector<Point> pts;
  for (int i = 0; i < 8; ++i) pts.push_back(Point{Rational(i), Rational(7 - i)});
  CHECK_THROWS_AS(restriction(family, pts, 10), BudgetExceeded);
}

TEST_CASE("hamming distance") {
  const auto F = oracle::labelings({{0, 0, 0}, {1, 0, 0}});
  CHECK(hamming_distance(oracle::labeling({1, 1, 1}), F) == 2);
  CHECK(hamming_distance(oracle::labeling({1, 0, 0}), F) == 0);
  CHECK_THROWS(hamming_distance(oracle::labeling({1}), std::vector<Labeling>{}));

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto fam = oracle::random_family(rng, 3, 4, 8);
    const auto all = oracle::cube(3, 4);
    const auto& y = all[rng() % all.size()];
    const auto d = hamming_distance(oracle::labeling(y), oracle::labelings(fam));
    CHECK(d == oracle::distance_to(y, fam));
    const bool member = std::find(fam.begin(), fam.end(), y) != fam.end();
    CHECK((d == 0) == member);
  }
}

TEST_CASE("empirical loss") {
  CHECK(empirical_loss(oracle::labeling({0, 1, 1}), oracle::labeling({0, 0, 0}), LossFunction::zero_one()) ==
        Rational(2, 3));
  CHECK(empirical_loss(oracle::labeling({1, 3}), oracle::labeling({0, 0}), LossFunction::absolute()) ==
        Rational(2));
  CHECK(empirical_loss(oracle::labeling({1, 3}), oracle::labeling({0, 0}), LossFunction::squared()) ==
        Rational(5));
  CHECK(empirical_loss(oracle::labeling({2, 2}), oracle::labeling({2, 2}), LossFunction::zero_one()) == Rational(0));
  CHECK_THROWS(empirical_loss(oracle::labeling({1}), oracle::labeling({1, 1}), LossFunction::zero_one()));

  std::mt19937_64 rng(8);
  const auto all = oracle::cube(3, 5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto& a = all[rng() % all.size()];
    const auto& b = all[rng() % all.size()];
    CHECK(empirical_loss(oracle::labeling(a), oracle::labeling(b), LossFunction::zero_one()) ==
          Rational(static_cast<std::int64_t>(oracle::hamming(a, b)), 5));
  }
}

TEST_CASE("loss functions vanish on the diagonal") {
  for (const auto& loss : {LossFunction::zero_one(), LossFunction::absolute(), LossFunction::squared()}) {
    for (int v = -2; v <= 2; ++v) CHECK(loss(Label(v), Label(v)) == Rational(0));
  }
  CHECK(LossFunction::zero_one()(Label(0), Label(5)) == Rational(1));
  LossFunction::Table t{{{Label(0), Label(1)}, Rational(3)}, {{Label(1), Label(0)}, Rational(1, 2)}};
  const auto custom = LossFunction::table(t);
  CHECK(custom(Label(0), Label(1)) == Rational(3));
  CHECK(custom(Label(1), Label(0)) == Rational(1, 2));
}

TEST_CASE("best in class loss") {
  const auto F = oracle::labelings({{0, 0}});
  CHECK(best_in_class_loss(F, oracle::labeling({1, 1}), LossFunction::zero_one()) == Rational(1));
  CHECK(best_in_class_loss(F, oracle::labeling({0, 0}), LossFunction::zero_one()) == Rational(0));
  CHECK_THROWS(best_in_class_loss(std::vector<Labeling>{}, oracle::labeling({0}), LossFunction::zero_one()));

  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 5;
    const auto fam = oracle::random_family(rng, 3, n, 8);
    const auto all = oracle::cube(3, n);
    const auto& y = all[rng() % all.size()];
    Rational best(100);
    for (const auto& f : fam) {
      Rational s(0);
      for (std::size_t i = 0; i < n; ++i) s += std::abs(f[i] - y[i]);
      best = std::min(best, s / static_cast<std::int64_t>(n));
    }
    CHECK(best_in_class_loss(oracle::labelings(fam), oracle::labeling(y), LossFunction::absolute()) == best);
  }
}

TEST_CASE("vc dimension") {
  Thresholds th;
  CHECK(vc_dimension(th, oracle::line_points({1, 2, 3, 4})) == 1);
  CHECK(vc_dimension(th, oracle::line_points({5, 9})) == 1);

  ExplicitTable single(oracle::line_points({1, 2}), oracle::labels(2), oracle::labelings({{1, 0}}));
  CHECK(vc_dimension(single, oracle::line_points({1, 2})) == 0);

  AxisAlignedRectangles rect(2);
  const auto diamond = oracle::plane_points({{0, 1}, {1, 0}, {2, 1}, {1, 2}, {1, 1}});
  CHECK(vc_dimension(rect, diamond) == 4);
  const auto brute = oracle::vc(diamond.size(), [&](const std::vector<std::size_t>& idx) {
    std::vector<Point> sub;
    for (auto i : idx) sub.push_back(diamond[i]);
    return oracle::rectangles(sub);
  });
  CHECK(brute == 4);

  AxisAlignedRectangles intervals(1);
  CHECK(vc_dimension(intervals, oracle::line_points({0, 1, 2, 3})) == 2);

  ExplicitTable ternary(oracle::line_points({1}), oracle::labels(3), oracle::labelings({{0}, {2}}));
  CHECK_THROWS(vc_dimension(ternary, oracle::line_points({1})));
}

TEST_CASE("vc dimension never exceeds log2 of the restriction size") {
  std::mt19937_64 rng(2);
  AxisAlignedRectangles rect(2);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> coord(0, 4);
    std::vector<Point> pool;
    for (int i = 0; i < 6; ++i) pool.push_back(Point{Rational(coord(rng)), Rational(coord(rng))});
    const auto d = vc_dimension(rect, pool);
    const auto size = restriction(rect, pool).size();
    CHECK(std::pow(2.0, static_cast<double>(d)) <= static_cast<double>(size));
  }
}

TEST_CASE("growth function") {
  CHECK(growth_function(1, 3) == 4);
  CHECK(growth_function(2, 4) == 11);
  CHECK(growth_function(0, 9) == 1);
  CHECK(growth_function(5, 3) == 8);
}

TEST_CASE("projection") {
  Thresholds th;
  const auto pts = oracle::line_points({1, 2, 3});

  SUBCASE("keeping two hypotheses gives a two-row table") {
    FiniteProjection proj{pts, oracle::labelings({{0, 0, 0}, {1, 1, 1}}), oracle::labels(2)};
    const auto table = project(th, proj);
    CHECK(table->rows().size() == 2);
    CHECK(restriction(*table, pts) == oracle::labelings({{0, 0, 0}, {1, 1, 1}}));
  }
  SUBCASE("full projection of a table is the same table") {
    ExplicitTable t(pts, oracle::labels(2), oracle::labelings({{0, 1, 0}, {1, 1, 0}}));
    FiniteProjection proj{pts, t.rows(), oracle::labels(2)};
    const auto table = project(t, proj);
    CHECK(table->rows() == t.rows());
    CHECK(table->domain() == t.domain());
  }
  SUBCASE("one hypothesis gives a singleton table") {
    FiniteProjection proj{pts, oracle::labelings({{0, 1, 1}}), oracle::labels(2)};
    CHECK(restriction(*project(th, proj), pts).size() == 1);
  }
  SUBCASE("a dropped label is rejected") {
    FiniteProjection proj{pts, oracle::labelings({{0, 1, 1}}), {Label(0)}};
    CHECK_THROWS(project(th, proj));
  }
  SUBCASE("a hypothesis outside the family is rejected") {
    FiniteProjection proj{pts, oracle::labelings({{1, 0, 1}}), oracle::labels(2)};
    CHECK_THROWS(project(th, proj));
  }
}

TEST_CASE("restriction of a projection is contained in the family restriction") {
  std::mt19937_64 rng(17);
  AxisAlignedRectangles rect(2);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> coord(0, 3);
    std::vector<Point> pool;
    for (int i = 0; i < 5; ++i) pool.push_back(Point{Rational(coord(rng)), Rational(coord(rng))});
    auto rows = restriction(rect, pool);
    std::shuffle(rows.begin(), rows.end(), rng);
    rows.resize(1 + rng() % rows.size());
    const auto table = project(rect, FiniteProjection{pool, rows, oracle::labels(2)});
    std::vector<Point> sub(pool.begin(), pool.begin() + 3);
    const auto inner = as_rows(restriction(*table, sub));
    const auto outer = as_rows(restriction(rect, sub));
    CHECK(std::includes(outer.begin(), outer.end(), inner.begin(), inner.end()));
  }
}

TEST_CASE("datasets validate lengths") {
  CHECK_THROWS(Dataset(oracle::line_points({1, 2}), oracle::labeling({0})));
  CHECK_THROWS(Dataset({}, {}));
  CHECK(Dataset(oracle::line_points({1}), oracle::labeling({1})).size() == 1);
}

}  // TEST_SUITE
