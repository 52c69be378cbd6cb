#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace oiglab {

/// Plain bipartite graph with mirrored adjacency lists. Left nodes are the
/// side matched at most once; right nodes carry demands.
struct BipartiteGraph {
  std::vector<std::vector<std::size_t>> left_adj;   // sorted right indices
  std::vector<std::vector<std::size_t>> right_adj;  // left indices

  std::size_t left_count() const noexcept { return left_adj.size(); }
  std::size_t right_count() const noexcept { return right_adj.size(); }
  std::size_t edge_count() const noexcept;

  /// Builds both adjacency lists from (left, right) pairs. Duplicate pairs
  /// are rejected with std::invalid_argument.
  static BipartiteGraph from_edges(std::size_t left_count, std::size_t right_count,
                                   const std::vector<std::pair<std::size_t, std::size_t>>& edges);

  /// True when left_adj and right_adj describe the same edge set.
  bool mirrored() const;
};

}  // namespace oiglab
