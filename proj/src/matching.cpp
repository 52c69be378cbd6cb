#include "oiglab/matching.hpp"

#include "oiglab/errors.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

namespace oiglab {

namespace {

constexpr std::size_t kNil = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

struct MatchState {
  std::vector<std::size_t> match_left;   // left -> right or kNil
  std::vector<std::size_t> match_right;  // right -> left or kNil
  std::size_t size = 0;
};

/// Hopcroft-Karp with an explicit DFS stack, so deep alternating paths in
/// large cloned graphs cannot overflow the call stack.
MatchState hopcroft_karp(const std::vector<std::vector<std::size_t>>& left_adj,
                         std::size_t right_count) {
  const std::size_t L = left_adj.size();
  MatchState s;
  s.match_left.assign(L, kNil);
  s.match_right.assign(right_count, kNil);
  std::vector<std::size_t> dist(L), cursor(L);
  std::vector<std::size_t> stack;
  std::deque<std::size_t> queue;

  while (true) {
    queue.clear();
    for (std::size_t u = 0; u < L; ++u) {
      dist[u] = s.match_left[u] == kNil ? 0 : kInf;
      if (dist[u] == 0) queue.push_back(u);
    }
    bool reachable_free = false;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (auto r : left_adj[u]) {
        const std::size_t w = s.match_right[r];
        if (w == kNil) {
          reachable_free = true;
        } else if (dist[w] == kInf) {
          dist[w] = dist[u] + 1;
          queue.push_back(w);
        }
      }
    }
    if (!reachable_free) break;

    std::fill(cursor.begin(), cursor.end(), 0);
    for (std::size_t root = 0; root < L; ++root) {
      if (s.match_left[root] != kNil || dist[root] != 0) continue;
      stack.assign(1, root);
      while (!stack.empty()) {
        const std::size_t u = stack.back();
        if (cursor[u] == left_adj[u].size()) {
          dist[u] = kInf;
          stack.pop_back();
          continue;
        }
        const std::size_t r = left_adj[u][cursor[u]];
        const std::size_t w = s.match_right[r];
        if (w == kNil) {
          for (auto v : stack) {
            const std::size_t rv = left_adj[v][cursor[v]];
            s.match_left[v] = rv;
            s.match_right[rv] = v;
          }
          ++s.size;
          stack.clear();
        } else if (dist[w] != kInf && dist[w] == dist[u] + 1) {
          stack.push_back(w);
        } else {
          ++cursor[u];
        }
      }
    }
  }
  return s;
}

/// Right node r replaced by max(0, demand[r]) unit-demand copies.
struct ClonedGraph {
  std::vector<std::vector<std::size_t>> left_adj;  // left -> copies
  std::vector<std::size_t> owner;                  // copy -> original right
  std::vector<std::size_t> first_copy;             // right -> first copy index
};

ClonedGraph clone(const BipartiteGraph& g, std::span<const std::int64_t> demands) {
  ClonedGraph c;
  c.first_copy.resize(g.right_count() + 1);
  for (std::size_t r = 0; r < g.right_count(); ++r) {
    c.first_copy[r] = c.owner.size();
    for (std::int64_t k = 0; k < demands[r]; ++k) c.owner.push_back(r);
  }
  c.first_copy[g.right_count()] = c.owner.size();
  c.left_adj.resize(g.left_count());
  for (std::size_t l = 0; l < g.left_count(); ++l) {
    for (auto r : g.left_adj[l]) {
      for (auto k = c.first_copy[r]; k < c.first_copy[r + 1]; ++k) c.left_adj[l].push_back(k);
    }
  }
  return c;
}

std::size_t neighborhood_size(const BipartiteGraph& g, std::span<const std::size_t> rights) {
  std::vector<bool> seen(g.left_count(), false);
  std::size_t count = 0;
  for (auto r : rights) {
    for (auto l : g.right_adj[r]) {
      if (!seen[l]) {
        seen[l] = true;
        ++count;
      }
    }
  }
  return count;
}

/// Alternating search from the unmatched copies of one right node. Every
/// reached left is matched (the matching is maximum), so the reached rights
/// have fewer neighbors than unit demands.
std::vector<std::size_t> deficient_set(const BipartiteGraph& g, const ClonedGraph& c,
                                       const MatchState& s, std::size_t root_right) {
  std::vector<bool> right_seen(g.right_count(), false), left_seen(g.left_count(), false);
  std::deque<std::size_t> queue{root_right};
  right_seen[root_right] = true;
  while (!queue.empty()) {
    const std::size_t r = queue.front();
    queue.pop_front();
    for (auto l : g.right_adj[r]) {
      if (left_seen[l]) continue;
      left_seen[l] = true;
      const std::size_t copy = s.match_left[l];
      if (copy == kNil) continue;
      const std::size_t next = c.owner[copy];
      if (!right_seen[next]) {
        right_seen[next] = true;
        queue.push_back(next);
      }
    }
  }
  std::vector<std::size_t> subset;
  for (std::size_t r = 0; r < g.right_count(); ++r) {
    if (right_seen[r]) subset.push_back(r);
  }
  return subset;
}

std::vector<std::int64_t> clamp_demands(const BipartiteGraph& g,
                                        std::span<const std::int64_t> demands) {
  if (demands.size() != g.right_count()) {
    throw std::invalid_argument("demand vector does not match the right side");
  }
  std::vector<std::int64_t> clamped(demands.begin(), demands.end());
  for (auto& b : clamped) b = std::max<std::int64_t>(b, 0);
  return clamped;
}

struct Feasibility {
  ClonedGraph cloned;
  MatchState state;
  bool feasible = false;
};

Feasibility solve_demands(const BipartiteGraph& g, std::span<const std::int64_t> demands) {
  Feasibility f;
  f.cloned = clone(g, demands);
  f.state = hopcroft_karp(f.cloned.left_adj, f.cloned.owner.size());
  f.feasible = f.state.size == f.cloned.owner.size();
  return f;
}

Matching to_matching(const Feasibility& f, std::size_t left_count) {
  Matching m;
  m.left_to_right.resize(left_count);
  for (std::size_t l = 0; l < left_count; ++l) {
    if (f.state.match_left[l] != kNil) m.left_to_right[l] = f.cloned.owner[f.state.match_left[l]];
  }
  return m;
}

}  // namespace

std::size_t Matching::size() const {
  return static_cast<std::size_t>(
      std::count_if(left_to_right.begin(), left_to_right.end(),
                    [](const std::optional<std::size_t>& r) { return r.has_value(); }));
}

std::vector<std::size_t> Matching::right_loads(std::size_t right_count) const {
  std::vector<std::size_t> loads(right_count, 0);
  for (const auto& r : left_to_right) {
    if (r) ++loads.at(*r);
  }
  return loads;
}

Matching max_matching(const BipartiteGraph& g) {
  const auto s = hopcroft_karp(g.left_adj, g.right_count());
  Matching m;
  m.left_to_right.resize(g.left_count());
  for (std::size_t l = 0; l < g.left_count(); ++l) {
    if (s.match_left[l] != kNil) m.left_to_right[l] = s.match_left[l];
  }
  return m;
}

BMatchingOutcome b_matching_feasible(const BipartiteGraph& g, std::span<const std::int64_t> demands) {
  const auto b = clamp_demands(g, demands);
  const auto f = solve_demands(g, b);
  if (f.feasible) return to_matching(f, g.left_count());

  // One search per right node owning an unmatched copy; keep the smallest.
  std::optional<std::vector<std::size_t>> best;
  for (std::size_t r = 0; r < g.right_count(); ++r) {
    bool has_free_copy = false;
    for (auto k = f.cloned.first_copy[r]; k < f.cloned.first_copy[r + 1]; ++k) {
      has_free_copy = has_free_copy || f.state.match_right[k] == kNil;
    }
    if (!has_free_copy) continue;
    auto subset = deficient_set(g, f.cloned, f.state, r);
    if (!best || subset.size() < best->size()) best = std::move(subset);
  }
  HallWitness w;
  w.right_subset = std::move(*best);
  w.neighborhood_size = neighborhood_size(g, w.right_subset);
  for (auto r : w.right_subset) w.demand += b[r];
  if (w.demand <= static_cast<std::int64_t>(w.neighborhood_size)) {
    throw std::logic_error("extracted Hall witness is not a violation");
  }
  return w;
}

OrientationResult optimal_orientation(const BipartiteGraph& g, std::size_t n,
                                      std::span<const std::int64_t> discounts) {
  if (discounts.size() != g.right_count()) {
    throw std::invalid_argument("discount vector does not match the right side");
  }
  for (std::size_t l = 0; l < g.left_count(); ++l) {
    if (g.left_adj[l].empty()) throw std::invalid_argument("left node without neighbors");
  }
  const auto demands_at = [&](std::int64_t k) {
    std::vector<std::int64_t> b(g.right_count());
    for (std::size_t r = 0; r < b.size(); ++r) {
      b[r] = std::max<std::int64_t>(0, static_cast<std::int64_t>(n) - k - discounts[r]);
    }
    return b;
  };

  // Feasibility is monotone in k and k = n needs nothing.
  std::int64_t lo = 0;
  std::int64_t hi = static_cast<std::int64_t>(n);
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (solve_demands(g, demands_at(mid)).feasible) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }

  const auto f = solve_demands(g, demands_at(lo));
  const auto m = to_matching(f, g.left_count());
  OrientationResult result;
  result.n = n;
  result.k_star = lo;
  result.assignment.resize(g.left_count());
  std::vector<std::int64_t> matched(g.right_count(), 0);
  for (std::size_t l = 0; l < g.left_count(); ++l) {
    // Scenarios outside the b-matching go to their first completion.
    result.assignment[l] = m.left_to_right[l].value_or(g.left_adj[l].front());
    ++matched[result.assignment[l]];
  }
  result.out_degree.resize(g.right_count());
  for (std::size_t r = 0; r < g.right_count(); ++r) {
    result.out_degree[r] = static_cast<std::int64_t>(g.right_adj[r].size()) - matched[r];
  }
  return result;
}

OrientationResult optimal_orientation(const BipartiteOig& g) {
  return optimal_orientation(g.graph, g.n, g.discounts);
}

Rational orientation_error(const OrientationResult& result, std::size_t n) {
  if (n == 0) throw std::invalid_argument("orientation error with n = 0");
  return Rational(result.k_star, static_cast<std::int64_t>(n));
}

Rational orientation_error(const OrientationResult& result) {
  return orientation_error(result, result.n);
}

Rational hall_complexity(const BipartiteGraph& g, std::size_t n,
                         std::span<const std::int64_t> discounts, std::size_t subset_budget) {
  const std::size_t R = g.right_count();
  if (discounts.size() != R) {
    throw std::invalid_argument("discount vector does not match the right side");
  }
  if (n == 0) throw std::invalid_argument("hall complexity with n = 0");
  constexpr std::size_t kHardCap = 40;
  if (R > std::min(subset_budget, kHardCap)) {
    throw BudgetExceeded("subsets", std::min(subset_budget, kHardCap), R);
  }

  std::vector<std::uint64_t> left_masks(g.left_count(), 0);
  for (std::size_t l = 0; l < g.left_count(); ++l) {
    for (auto r : g.left_adj[l]) left_masks[l] |= std::uint64_t{1} << r;
  }

  const auto N = static_cast<std::int64_t>(n);
  std::int64_t k = 0;
  const std::uint64_t end = std::uint64_t{1} << R;
  for (std::uint64_t subset = 1; subset < end; ++subset) {
    std::int64_t neighbors = 0;
    for (auto m : left_masks) neighbors += (m & subset) != 0;
    const auto demand_at = [&](std::int64_t level) {
      std::int64_t total = 0;
      for (std::size_t r = 0; r < R; ++r) {
        if (subset >> r & 1U) total += std::max<std::int64_t>(0, N - level - discounts[r]);
      }
      return total;
    };
    while (k < N && demand_at(k) > neighbors) ++k;
  }
  return Rational(k, N);
}

Rational hall_complexity(const BipartiteOig& g, std::size_t subset_budget) {
  return hall_complexity(g.graph, g.n, g.discounts, subset_budget);
}

Requirements epsilon_demands(const BipartiteOig& g, const Rational& eps) {
  const std::int64_t base = ceil_of((Rational(1) - eps) * static_cast<std::int64_t>(g.n));
  Requirements b(g.right.size());
  for (std::size_t r = 0; r < b.size(); ++r) b[r] = std::max<std::int64_t>(0, base - g.discounts[r]);
  return b;
}

CompactnessReport compactness_check(const BipartiteOig& g, const Rational& eps,
                                    std::size_t subset_size_cap, std::size_t max_subsets) {
  CompactnessReport report;
  report.eps = eps;
  const auto demands = epsilon_demands(g, eps);
  const auto whole = b_matching_feasible(g.graph, demands);
  report.whole_feasible = std::holds_alternative<Matching>(whole);
  if (!report.whole_feasible) report.witness = std::get<HallWitness>(whole);

  const std::size_t R = g.right.size();
  const std::size_t cap = std::min(subset_size_cap, R);
  std::vector<std::size_t> local(g.left.size(), kNil);

  for (std::size_t size = 1; size <= cap; ++size) {
    std::vector<std::size_t> subset(size);
    for (std::size_t i = 0; i < size; ++i) subset[i] = i;
    while (true) {
      if (++report.subsets_checked > max_subsets) {
        throw BudgetExceeded("compactness-subsets", max_subsets, report.subsets_checked);
      }
      // Subgraph induced by the subset and its neighbors.
      std::vector<std::size_t> lefts;
      for (auto r : subset) {
        for (auto l : g.graph.right_adj[r]) {
          if (local[l] == kNil) {
            local[l] = lefts.size();
            lefts.push_back(l);
          }
        }
      }
      std::vector<std::pair<std::size_t, std::size_t>> edges;
      std::vector<std::int64_t> sub_demands;
      for (std::size_t k = 0; k < size; ++k) {
        for (auto l : g.graph.right_adj[subset[k]]) edges.emplace_back(local[l], k);
        sub_demands.push_back(demands[subset[k]]);
      }
      for (auto l : lefts) local[l] = kNil;
      const auto sub = BipartiteGraph::from_edges(lefts.size(), size, edges);
      if (!std::holds_alternative<Matching>(b_matching_feasible(sub, sub_demands))) {
        report.subsets_feasible = false;
        report.first_infeasible = subset;
        return report;
      }

      // Next combination in lexicographic order.
      std::size_t i = size;
      while (i > 0 && subset[i - 1] == R - size + i - 1) --i;
      if (i == 0) break;
      ++subset[i - 1];
      for (std::size_t j = i; j < size; ++j) subset[j] = subset[j - 1] + 1;
    }
  }
  return report;
}

}  // namespace oiglab
