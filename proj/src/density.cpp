#include "oiglab/errors.hpp"
#include "oiglab/matching.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <stdexcept>

namespace oiglab {

namespace {

/// Dinic max-flow on int64 capacities; just enough for the density cut.
class FlowNetwork {
 public:
  explicit FlowNetwork(std::size_t nodes) : adj_(nodes), level_(nodes), cursor_(nodes) {}

  void add_edge(std::size_t from, std::size_t to, std::int64_t capacity) {
    adj_[from].push_back(arcs_.size());
    arcs_.push_back({to, capacity});
    adj_[to].push_back(arcs_.size());
    arcs_.push_back({from, 0});
  }

  std::int64_t max_flow(std::size_t source, std::size_t sink) {
    std::int64_t total = 0;
    while (bfs(source, sink)) {
      std::fill(cursor_.begin(), cursor_.end(), 0);
      while (const std::int64_t pushed =
                 dfs(source, sink, std::numeric_limits<std::int64_t>::max())) {
        total += pushed;
      }
    }
    return total;
  }

  /// Nodes reachable from the source in the residual graph after max_flow.
  std::vector<bool> source_side(std::size_t source) const {
    std::vector<bool> seen(adj_.size(), false);
    std::deque<std::size_t> queue{source};
    seen[source] = true;
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      for (auto a : adj_[u]) {
        if (arcs_[a].capacity > 0 && !seen[arcs_[a].to]) {
          seen[arcs_[a].to] = true;
          queue.push_back(arcs_[a].to);
        }
      }
    }
    return seen;
  }

 private:
  struct Arc {
    std::size_t to;
    std::int64_t capacity;
  };

  bool bfs(std::size_t source, std::size_t sink) {
    std::fill(level_.begin(), level_.end(), -1);
    std::deque<std::size_t> queue{source};
    level_[source] = 0;
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      for (auto a : adj_[u]) {
        if (arcs_[a].capacity > 0 && level_[arcs_[a].to] < 0) {
          level_[arcs_[a].to] = level_[u] + 1;
          queue.push_back(arcs_[a].to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  std::int64_t dfs(std::size_t u, std::size_t sink, std::int64_t limit) {
    if (u == sink) return limit;
    for (; cursor_[u] < adj_[u].size(); ++cursor_[u]) {
      const auto a = adj_[u][cursor_[u]];
      const auto v = arcs_[a].to;
      if (arcs_[a].capacity <= 0 || level_[v] != level_[u] + 1) continue;
      if (const auto pushed = dfs(v, sink, std::min(limit, arcs_[a].capacity)); pushed > 0) {
        arcs_[a].capacity -= pushed;
        arcs_[a ^ 1].capacity += pushed;
        return pushed;
      }
    }
    return 0;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  std::vector<std::size_t> cursor_;
};

using EdgeList = std::vector<std::pair<std::size_t, std::size_t>>;

EdgeList simple_edges(std::size_t node_count,
                      std::span<const std::pair<std::size_t, std::size_t>> edges) {
  std::set<std::pair<std::size_t, std::size_t>> unique;
  for (auto [u, v] : edges) {
    if (u >= node_count || v >= node_count) throw std::out_of_range("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loops are not allowed");
    unique.emplace(std::min(u, v), std::max(u, v));
  }
  return {unique.begin(), unique.end()};
}

Rational exhaustive_density(std::size_t node_count, const EdgeList& edges) {
  std::vector<std::uint64_t> adj(node_count, 0);
  for (auto [u, v] : edges) {
    adj[u] |= std::uint64_t{1} << v;
    adj[v] |= std::uint64_t{1} << u;
  }
  Rational best(0);
  for (std::uint64_t subset = 1; subset < (std::uint64_t{1} << node_count); ++subset) {
    std::int64_t twice_edges = 0;
    for (std::size_t v = 0; v < node_count; ++v) {
      if (subset >> v & 1U) twice_edges += __builtin_popcountll(adj[v] & subset);
    }
    best = std::max(best, Rational(twice_edges, __builtin_popcountll(subset)));
  }
  return best;
}

/// Goldberg's construction: for g = p/q the min cut is below q*m*N exactly
/// when some U has |E(U)| / |U| > g, and the source side then names such a U.
std::optional<std::vector<std::size_t>> denser_than(std::size_t node_count, const EdgeList& edges,
                                                    const Rational& g) {
  const std::int64_t p = g.numerator();
  const std::int64_t q = g.denominator();
  const auto m = static_cast<std::int64_t>(edges.size());
  const auto N = static_cast<std::int64_t>(node_count);
  std::vector<std::int64_t> degree(node_count, 0);
  for (auto [u, v] : edges) {
    ++degree[u];
    ++degree[v];
  }
  const std::size_t source = node_count;
  const std::size_t sink = node_count + 1;
  FlowNetwork net(node_count + 2);
  for (std::size_t v = 0; v < node_count; ++v) {
    net.add_edge(source, v, q * m);
    net.add_edge(v, sink, q * m + 2 * p - q * degree[v]);
  }
  for (auto [u, v] : edges) {
    net.add_edge(u, v, q);
    net.add_edge(v, u, q);
  }
  const std::int64_t cut = net.max_flow(source, sink);
  if (cut >= q * m * N) return std::nullopt;
  const auto side = net.source_side(source);
  std::vector<std::size_t> subset;
  for (std::size_t v = 0; v < node_count; ++v) {
    if (side[v]) subset.push_back(v);
  }
  return subset;
}

/// Every density |E(U)| / |U| is a/b with b <= N and a <= min(m, b(b-1)/2);
/// binary search over that sorted set for the first value nothing exceeds.
Rational parametric_density(std::size_t node_count, const EdgeList& edges) {
  if (edges.empty()) return Rational(0);
  const auto m = static_cast<std::int64_t>(edges.size());
  std::vector<Rational> candidates;
  for (std::int64_t b = 1; b <= static_cast<std::int64_t>(node_count); ++b) {
    for (std::int64_t a = 0; a <= std::min(m, b * (b - 1) / 2); ++a) {
      candidates.emplace_back(a, b);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::size_t lo = 0;
  std::size_t hi = candidates.size() - 1;  // nothing is denser than the largest
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (denser_than(node_count, edges, candidates[mid])) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return candidates[lo];
}

}  // namespace

Rational max_avg_degree(std::size_t node_count,
                        std::span<const std::pair<std::size_t, std::size_t>> raw_edges,
                        DensityMode mode, std::size_t subset_budget) {
  if (node_count == 0) throw std::invalid_argument("max average degree of an empty graph");
  const auto edges = simple_edges(node_count, raw_edges);
  constexpr std::size_t kHardCap = 40;
  const std::size_t cap = std::min(subset_budget, kHardCap);
  const bool exhaustive =
      mode == DensityMode::exhaustive || (mode == DensityMode::automatic && node_count <= cap);
  if (exhaustive) {
    if (node_count > cap) throw BudgetExceeded("subsets", cap, node_count);
    return exhaustive_density(node_count, edges);
  }
  return 2 * parametric_density(node_count, edges);
}

Rational max_avg_degree(const OneInclusionGraph& g, DensityMode mode, std::size_t subset_budget) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& e : g.hyperedges) {
    if (e.members.size() != 2) {
      throw std::invalid_argument("max average degree is defined for binary OIGs only");
    }
    edges.emplace_back(e.members[0], e.members[1]);
  }
  return max_avg_degree(g.nodes.size(), edges, mode, subset_budget);
}

}  // namespace oiglab
