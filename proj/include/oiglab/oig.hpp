#pragma once

#include "oiglab/bipartite_graph.hpp"
#include "oiglab/core.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace oiglab {

/// Maximal set of labelings that agree off `coordinate` and pairwise differ
/// on it.
struct Hyperedge {
  std::size_t coordinate = 0;
  std::vector<std::size_t> members;  // ascending node indices

  friend bool operator==(const Hyperedge&, const Hyperedge&) = default;
};

struct OneInclusionGraph {
  std::size_t n = 0;
  std::vector<Labeling> nodes;  // sorted
  std::vector<Hyperedge> hyperedges;
  std::vector<std::int64_t> discounts;

  /// Every hyperedge has exactly two members.
  bool is_binary() const;
};

/// Right side: full labelings. Left side: partial labelings (scenarios).
/// An edge joins p and y when y completes p. Scenarios with a single
/// completion are kept, so every right node has degree exactly n.
struct BipartiteOig {
  std::size_t n = 0;
  std::vector<Label> label_space;
  std::vector<PartialLabeling> left;   // sorted by (hole, entries)
  std::vector<Labeling> right;         // sorted
  std::vector<std::int64_t> discounts; // per right node
  BipartiteGraph graph;                // right_adj[r][i] has its hole at i

  /// Index of a scenario among the left nodes, or left.size() if absent.
  std::size_t find_left(const PartialLabeling& p) const;
  std::size_t find_right(const Labeling& y) const;
};

OneInclusionGraph build_oig(std::span<const Labeling> labelings,
                            std::size_t node_budget = Budgets{}.nodes);

BipartiteOig build_bipartite_oig(std::span<const Labeling> labelings,
                                 std::span<const Label> label_space,
                                 std::size_t node_budget = Budgets{}.nodes);

/// Right side is all of Y^n, each node discounted by its Hamming distance
/// to `class_restriction`.
BipartiteOig build_agnostic_oig(std::span<const Labeling> class_restriction,
                                std::span<const Label> label_space, std::size_t n,
                                std::size_t node_budget = Budgets{}.agnostic_nodes);

/// Checks that `bipartite` is the incidence graph of `oig` augmented with
/// self-loops: scenarios of degree >= 2 biject onto hyperedges and degree-1
/// scenarios sit on coordinates where their completion has no hyperedge.
bool incidence_consistency_check(const OneInclusionGraph& oig, const BipartiteOig& bipartite);

/// Line-oriented text dumps with stable ordering, for golden diffs.
std::string dump(const OneInclusionGraph& g);
std::string dump(const BipartiteOig& g);

}  // namespace oiglab
