#pragma once

#include "oiglab/bipartite_graph.hpp"
#include "oiglab/core.hpp"
#include "oiglab/oig.hpp"
#include "oiglab/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace oiglab {

/// Partial map left -> right along edges.
struct Matching {
  std::vector<std::optional<std::size_t>> left_to_right;

  std::size_t size() const;
  /// Number of left nodes matched to each right node.
  std::vector<std::size_t> right_loads(std::size_t right_count) const;
};

/// Per-right minimum number of matches. Negative entries mean no demand.
using Requirements = std::vector<std::int64_t>;

/// A set of right nodes demanding more matches than they have neighbors.
struct HallWitness {
  std::vector<std::size_t> right_subset;  // ascending
  std::size_t neighborhood_size = 0;
  std::int64_t demand = 0;                // > neighborhood_size
};

using BMatchingOutcome = std::variant<Matching, HallWitness>;

struct OrientationResult {
  std::size_t n = 0;
  std::int64_t k_star = 0;
  std::vector<std::size_t> assignment;       // left -> right, total
  std::vector<std::int64_t> out_degree;      // per right node
};

/// Hopcroft-Karp. Each left and each right node is used at most once.
Matching max_matching(const BipartiteGraph& g);

/// Left nodes used at most once, right node r at least demands[r] times.
/// Returns a matching meeting every demand or a Hall violation.
BMatchingOutcome b_matching_feasible(const BipartiteGraph& g, std::span<const std::int64_t> demands);

/// Smallest k such that every right node r can be matched
/// max(0, n - k - discount[r]) times, with a total assignment realizing it.
/// Every left node must have a neighbor.
OrientationResult optimal_orientation(const BipartiteGraph& g, std::size_t n,
                                      std::span<const std::int64_t> discounts);
OrientationResult optimal_orientation(const BipartiteOig& g);

/// k_star / n.
Rational orientation_error(const OrientationResult& result, std::size_t n);
Rational orientation_error(const OrientationResult& result);

/// Largest normalized Hall deficiency over nonempty right subsets, i.e. the
/// least eps = k/n for which demands max(0, n - k - discount) satisfy Hall's
/// condition. Exact subset enumeration; throws BudgetExceeded when the right
/// side has more than `subset_budget` nodes.
Rational hall_complexity(const BipartiteGraph& g, std::size_t n,
                         std::span<const std::int64_t> discounts,
                         std::size_t subset_budget = Budgets{}.subset_nodes);
Rational hall_complexity(const BipartiteOig& g, std::size_t subset_budget = Budgets{}.subset_nodes);

enum class DensityMode {
  automatic,   // exhaustive within budget, parametric flow beyond
  exhaustive,  // subset enumeration only
  parametric,  // min-cut search only
};

/// max over nonempty node sets U of 2 |E(U)| / |U| for a simple graph.
Rational max_avg_degree(std::size_t node_count,
                        std::span<const std::pair<std::size_t, std::size_t>> edges,
                        DensityMode mode = DensityMode::automatic,
                        std::size_t subset_budget = Budgets{}.subset_nodes);
/// Binary OIGs only; hyperedges with more than two members are rejected.
Rational max_avg_degree(const OneInclusionGraph& g, DensityMode mode = DensityMode::automatic,
                        std::size_t subset_budget = Budgets{}.subset_nodes);

struct CompactnessReport {
  Rational eps;
  bool whole_feasible = false;
  bool subsets_feasible = true;       // every checked subset feasible
  std::size_t subsets_checked = 0;
  std::optional<std::vector<std::size_t>> first_infeasible;
  std::optional<HallWitness> witness;  // for the whole graph

  /// The whole graph and its checked right-induced subgraphs agree.
  bool consistent() const { return whole_feasible == subsets_feasible; }
};

/// Compares feasibility of the eps-level b-matching on the whole graph with
/// feasibility on every subgraph induced by at most `subset_size_cap` right
/// nodes and their neighbors. Subsets are visited by size, then
/// lexicographically; the walk stops at the first infeasible one.
CompactnessReport compactness_check(const BipartiteOig& g, const Rational& eps,
                                    std::size_t subset_size_cap,
                                    std::size_t max_subsets = std::size_t{1} << 20);

/// Demands b_r = max(0, ceil((1 - eps) n) - discount_r).
Requirements epsilon_demands(const BipartiteOig& g, const Rational& eps);

}  // namespace oiglab
