#include "oiglab/matching.hpp"
#include "oiglab/errors.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <numeric>
#include <random>

using namespace oiglab;
using oracle::Row;

namespace {

BipartiteGraph graph(std::size_t left, std::size_t right, const oracle::Edges& edges) {
  return BipartiteGraph::from_edges(left, right, edges);
}

oracle::Edges edges_of(const BipartiteGraph& g) {
  oracle::Edges out;
  for (std::size_t l = 0; l < g.left_count(); ++l) {
    for (auto r : g.left_adj[l]) out.emplace_back(l, r);
  }
  return out;
}

void check_matching(const BipartiteGraph& g, const Matching& m) {
  std::vector<int> used(g.right_count(), 0);
  for (std::size_t l = 0; l < m.left_to_right.size(); ++l) {
    if (!m.left_to_right[l]) continue;
    const auto r = *m.left_to_right[l];
    CHECK(std::binary_search(g.left_adj[l].begin(), g.left_adj[l].end(), r));
    ++used[r];
  }
  for (auto u : used) CHECK(u <= 1);
}

BipartiteOig bipartite(const std::vector<Row>& rows, int q) {
  return build_bipartite_oig(oracle::labelings(rows), oracle::labels(q));
}

std::vector<Row> path_rows() { return {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1}}; }

}  // namespace

TEST_SUITE("matching") {

TEST_CASE("maximum matching small cases") {
  oracle::Edges k33;
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) k33.emplace_back(a, b);
  }
  CHECK(max_matching(graph(3, 3, k33)).size() == 3);
  CHECK(max_matching(graph(1, 2, {{0, 0}, {0, 1}})).size() == 1);
  CHECK(max_matching(graph(2, 2, {})).size() == 0);
}

TEST_CASE("maximum matching agrees with exhaustive search") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t left = 1 + rng() % 12;
    const std::size_t right = 1 + rng() % 12;
    const auto e = oracle::random_graph(rng, left, right, 0.1 + 0.05 * (trial % 6));
    const auto g = graph(left, right, e);
    const auto m = max_matching(g);
    check_matching(g, m);
    CHECK(m.size() == oracle::max_matching(left, right, e));
  }
}

TEST_CASE("maximum matching size ignores node order") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t left = 2 + rng() % 9;
    const std::size_t right = 2 + rng() % 9;
    const auto e = oracle::random_graph(rng, left, right, 0.3);
    std::vector<std::size_t> pl(left), pr(right);
    std::iota(pl.begin(), pl.end(), 0);
    std::iota(pr.begin(), pr.end(), 0);
    std::shuffle(pl.begin(), pl.end(), rng);
    std::shuffle(pr.begin(), pr.end(), rng);
    oracle::Edges shuffled;
    for (auto [a, b] : e) shuffled.emplace_back(pl[a], pr[b]);
    CHECK(max_matching(graph(left, right, e)).size() == max_matching(graph(left, right, shuffled)).size());
  }
}

TEST_CASE("b-matching") {
  SUBCASE("zero demands are trivially feasible") {
    const auto g = graph(2, 2, {{0, 0}, {1, 1}});
    const std::vector<std::int64_t> b{0, 0};
    const auto out = b_matching_feasible(g, b);
    REQUIRE(std::holds_alternative<Matching>(out));
    CHECK(std::get<Matching>(out).size() == 0);
  }
  SUBCASE("pigeonhole gives a witness") {
    const auto g = graph(1, 2, {{0, 0}, {0, 1}});
    const std::vector<std::int64_t> b{1, 1};
    const auto out = b_matching_feasible(g, b);
    REQUIRE(std::holds_alternative<HallWitness>(out));
    const auto& w = std::get<HallWitness>(out);
    CHECK(w.right_subset == std::vector<std::size_t>{0, 1});
    CHECK(w.neighborhood_size == 1);
    CHECK(w.demand == 2);
  }
  SUBCASE("negative demands clamp to zero") {
    const auto g = graph(1, 2, {{0, 0}, {0, 1}});
    const std::vector<std::int64_t> b{1, -3};
    CHECK(std::holds_alternative<Matching>(b_matching_feasible(g, b)));
  }
}

TEST_CASE("b-matching agrees with the Hall condition") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t left = 1 + rng() % 12;
    const std::size_t right = 1 + rng() % 10;
    const auto e = oracle::random_graph(rng, left, right, 0.35);
    const auto g = graph(left, right, e);
    std::vector<std::int64_t> b(right);
    for (auto& x : b) x = static_cast<std::int64_t>(rng() % 3);
    const auto out = b_matching_feasible(g, b);
    const bool hall = oracle::hall_condition(right, e, b);
    CHECK(std::holds_alternative<Matching>(out) == hall);
    if (const auto* m = std::get_if<Matching>(&out)) {
      const auto loads = m->right_loads(right);
      for (std::size_t r = 0; r < right; ++r) CHECK(static_cast<std::int64_t>(loads[r]) >= b[r]);
      for (std::size_t l = 0; l < left; ++l) {
        if (m->left_to_right[l]) {
          const auto r = *m->left_to_right[l];
          CHECK(std::binary_search(g.left_adj[l].begin(), g.left_adj[l].end(), r));
        }
      }
    } else {
      const auto& w = std::get<HallWitness>(out);
      std::set<std::size_t> nbrs;
      std::int64_t need = 0;
      for (auto r : w.right_subset) {
        need += std::max<std::int64_t>(0, b[r]);
        for (auto l : g.right_adj[r]) nbrs.insert(l);
      }
      CHECK(need == w.demand);
      CHECK(nbrs.size() == w.neighborhood_size);
      CHECK(w.demand > static_cast<std::int64_t>(w.neighborhood_size));
    }
  }
}

TEST_CASE("optimal orientation of the path") {
  const auto g = bipartite(path_rows(), 2);
  const auto o = optimal_orientation(g);
  CHECK(o.k_star == 1);
  CHECK(orientation_error(o) == Rational(1, 3));
  CHECK(o.k_star == oracle::min_max_outdegree(path_rows(), std::vector<std::int64_t>(4, 0)));
  // Out-degrees follow from the assignment.
  std::vector<std::int64_t> matched(g.right.size(), 0);
  for (auto r : o.assignment) ++matched[r];
  for (std::size_t r = 0; r < g.right.size(); ++r) {
    CHECK(o.out_degree[r] == static_cast<std::int64_t>(g.n) - matched[r]);
  }
  CHECK(*std::max_element(o.out_degree.begin(), o.out_degree.end()) == o.k_star);
}

TEST_CASE("single labeling needs no mistakes") {
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto g = bipartite({Row(n, 1)}, 2);
    CHECK(optimal_orientation(g).k_star == 0);
    CHECK(hall_complexity(g) == Rational(0));
  }
}

TEST_CASE("full cube orientation is ceil(n/2)") {
  for (std::size_t n = 2; n <= 4; ++n) {
    const auto rows = oracle::cube(2, n);
    const auto o = optimal_orientation(bipartite(rows, 2));
    CHECK(o.k_star == static_cast<std::int64_t>((n + 1) / 2));
    if (n <= 3) CHECK(o.k_star == oracle::min_max_outdegree(rows, std::vector<std::int64_t>(rows.size(), 0)));
  }
}

TEST_CASE("orientation error") {
  OrientationResult r;
  r.k_star = 0;
  CHECK(orientation_error(r, 4) == Rational(0));
  r.k_star = 1;
  CHECK(orientation_error(r, 3) == Rational(1, 3));
}

TEST_CASE("thresholds have error 1/n") {
  Thresholds th;
  for (int n = 3; n <= 8; ++n) {
    std::vector<int> xs(n);
    std::iota(xs.begin(), xs.end(), 1);
    const auto h = restriction(th, oracle::line_points(xs));
    const auto g = build_bipartite_oig(h, th.label_space());
    CHECK(orientation_error(optimal_orientation(g)) == Rational(1, n));
  }
}

TEST_CASE("orientation matches exhaustive search") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 40; ++trial) {
    const int q = 2 + trial % 2;
    const std::size_t n = q == 2 ? 4 : 3;
    const auto rows = oracle::random_family(rng, q, n, q == 2 ? 8 : 7);
    const auto g = bipartite(rows, q);
    const auto o = optimal_orientation(g);
    CHECK(o.k_star == oracle::min_max_outdegree(rows, std::vector<std::int64_t>(rows.size(), 0)));
  }
}

TEST_CASE("agnostic orientation matches exhaustive search") {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 20; ++trial) {
    const auto fam = oracle::random_family(rng, 2, 3, 3);
    const auto g = build_agnostic_oig(oracle::labelings(fam), oracle::labels(2), 3);
    const auto all = oracle::cube(2, 3);
    std::vector<std::int64_t> disc;
    for (const auto& y : all) disc.push_back(static_cast<std::int64_t>(oracle::distance_to(y, fam)));
    CHECK(optimal_orientation(g).k_star == oracle::min_max_outdegree(all, disc));
    CHECK(hall_complexity(g) * Rational(3) == Rational(optimal_orientation(g).k_star));
  }
}

TEST_CASE("hall complexity") {
  CHECK(hall_complexity(bipartite(path_rows(), 2)) == Rational(1, 3));
  // Two labelings on one point share their only scenario: one of them is always missed.
  const auto g = bipartite({{0}, {1}}, 2);
  CHECK(g.left.size() == 1);
  CHECK(hall_complexity(g) == Rational(1));
  CHECK(orientation_error(optimal_orientation(g)) == Rational(1));
  CHECK_THROWS_AS(hall_complexity(bipartite(oracle::cube(2, 4), 2), 8), BudgetExceeded);
}

TEST_CASE("duality and the defect formula") {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 60; ++trial) {
    const int q = 2 + trial % 2;
    const std::size_t n = 2 + rng() % 3;
    const auto rows = oracle::random_family(rng, q, n, 12);
    const auto g = bipartite(rows, q);
    const auto o = optimal_orientation(g);
    const auto eps = hall_complexity(g);
    CHECK(eps * Rational(static_cast<std::int64_t>(n)) == Rational(o.k_star));

    // k* = max over nonempty R' of ceil(n - |N(R')|/|R'|).
    std::int64_t defect = 0;
    const auto R = g.right.size();
    for (std::uint32_t mask = 1; mask < (1u << R); ++mask) {
      std::set<std::size_t> nbrs;
      for (std::size_t r = 0; r < R; ++r) {
        if (mask >> r & 1u) nbrs.insert(g.graph.right_adj[r].begin(), g.graph.right_adj[r].end());
      }
      const Rational v = Rational(static_cast<std::int64_t>(n)) -
                         Rational(static_cast<std::int64_t>(nbrs.size()), std::popcount(mask));
      defect = std::max(defect, ceil_of(v));
    }
    CHECK(defect == o.k_star);
  }
}

TEST_CASE("hall complexity is monotone") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 15; ++trial) {
    const int q = 2 + trial % 2;
    auto pool = oracle::cube(q, 3);
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<Row> rows;
    Rational prev(0);
    for (std::size_t k = 0; k < std::min<std::size_t>(pool.size(), 12); ++k) {
      rows.push_back(pool[k]);
      auto sorted = rows;
      std::sort(sorted.begin(), sorted.end());
      const auto eps = hall_complexity(bipartite(sorted, q));
      CHECK(eps >= prev);
      prev = eps;
    }
  }
  SUBCASE("merging scenarios never helps the adversary") {
    // Adding a left node adjacent to both ends of the 2-path lowers the optimum.
    const auto g = bipartite({{0}, {1}}, 2);
    const std::vector<std::int64_t> zero(2, 0);
    const auto before = hall_complexity(g.graph, 1, zero);
    auto e = edges_of(g.graph);
    e.emplace_back(g.left.size(), 0);
    const auto grown = graph(g.left.size() + 1, 2, e);
    CHECK(hall_complexity(grown, 1, zero) <= before);
  }
}

TEST_CASE("max average degree") {
  CHECK(max_avg_degree(1, {}) == Rational(0));
  const oracle::Edges c4{{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  CHECK(max_avg_degree(4, c4) == Rational(2));
  CHECK(max_avg_degree(4, c4, DensityMode::parametric) == Rational(2));

  std::mt19937_64 rng(38);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t nodes = 1 + rng() % 12;
    oracle::Edges e;
    std::bernoulli_distribution coin(0.1 + 0.05 * (trial % 8));
    for (std::size_t u = 0; u < nodes; ++u) {
      for (std::size_t v = u + 1; v < nodes; ++v) {
        if (coin(rng)) e.emplace_back(u, v);
      }
    }
    const auto brute = oracle::max_avg_degree(nodes, e);
    CHECK(max_avg_degree(nodes, e, DensityMode::exhaustive) == brute);
    CHECK(max_avg_degree(nodes, e, DensityMode::parametric) == brute);
  }
  CHECK_THROWS(max_avg_degree(build_oig(oracle::labelings({{0}, {1}, {2}}))));
}

TEST_CASE("density sandwich on binary OIGs") {
  std::mt19937_64 rng(39);
  for (int trial = 0; trial < 40; ++trial) {
    const auto rows = oracle::random_family(rng, 2, 4, 16);
    const auto oig = build_oig(oracle::labelings(rows));
    const auto mad = max_avg_degree(oig);
    const auto k = optimal_orientation(bipartite(rows, 2)).k_star;
    CHECK(mad / Rational(2) <= Rational(k));
    CHECK(Rational(k) <= Rational(ceil_of(mad)));
  }
}

TEST_CASE("compactness on bipartite OIGs") {
  const auto path = bipartite(path_rows(), 2);
  SUBCASE("path at eps 1/3 is feasible everywhere") {
    const auto rep = compactness_check(path, Rational(1, 3), 4);
    CHECK(rep.whole_feasible);
    CHECK(rep.subsets_feasible);
    CHECK(rep.consistent());
    CHECK(rep.subsets_checked == 15);
  }
  SUBCASE("path at eps 0 fails on a subset matching the witness") {
    const auto rep = compactness_check(path, Rational(0), 4);
    CHECK_FALSE(rep.whole_feasible);
    CHECK_FALSE(rep.subsets_feasible);
    CHECK(rep.consistent());
    REQUIRE(rep.first_infeasible);
    REQUIRE(rep.witness);
    CHECK(rep.witness->right_subset.size() <= 4);
    const auto sub = b_matching_feasible(path.graph, epsilon_demands(path, Rational(0)));
    CHECK(std::holds_alternative<HallWitness>(sub));
  }
  SUBCASE("random instances are consistent") {
    std::mt19937_64 rng(40);
    for (int trial = 0; trial < 20; ++trial) {
      const auto rows = oracle::random_family(rng, 2, 3, 8);
      const auto g = bipartite(rows, 2);
      for (std::int64_t k = 0; k <= 3; ++k) {
        const auto rep = compactness_check(g, Rational(k, 3), g.right.size());
        CHECK(rep.consistent());
      }
    }
  }
}

}  // TEST_SUITE
