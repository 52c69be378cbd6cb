#include "oiglab/oig.hpp"

#include "oiglab/errors.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace oiglab {

std::size_t BipartiteGraph::edge_count() const noexcept {
  std::size_t total = 0;
  for (const auto& adj : left_adj) total += adj.size();
  return total;
}

BipartiteGraph BipartiteGraph::from_edges(
    std::size_t left_count, std::size_t right_count,
    const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  BipartiteGraph g;
  g.left_adj.resize(left_count);
  g.right_adj.resize(right_count);
  for (const auto& [l, r] : edges) {
    if (l >= left_count || r >= right_count) throw std::out_of_range("edge endpoint out of range");
    g.left_adj[l].push_back(r);
    g.right_adj[r].push_back(l);
  }
  for (auto& adj : g.left_adj) {
    std::sort(adj.begin(), adj.end());
    if (std::adjacent_find(adj.begin(), adj.end()) != adj.end()) {
      throw std::invalid_argument("duplicate edge in bipartite graph");
    }
  }
  return g;
}

bool BipartiteGraph::mirrored() const {
  std::set<std::pair<std::size_t, std::size_t>> from_left, from_right;
  for (std::size_t l = 0; l < left_adj.size(); ++l) {
    for (auto r : left_adj[l]) {
      if (r >= right_adj.size() || !from_left.emplace(l, r).second) return false;
    }
  }
  for (std::size_t r = 0; r < right_adj.size(); ++r) {
    for (auto l : right_adj[r]) {
      if (l >= left_adj.size() || !from_right.emplace(l, r).second) return false;
    }
  }
  return from_left == from_right;
}

bool OneInclusionGraph::is_binary() const {
  return std::all_of(hyperedges.begin(), hyperedges.end(),
                     [](const Hyperedge& e) { return e.members.size() == 2; });
}

std::size_t BipartiteOig::find_left(const PartialLabeling& p) const {
  const auto it = std::lower_bound(left.begin(), left.end(), p);
  return (it != left.end() && *it == p) ? static_cast<std::size_t>(it - left.begin())
                                        : left.size();
}

std::size_t BipartiteOig::find_right(const Labeling& y) const {
  const auto it = std::lower_bound(right.begin(), right.end(), y);
  return (it != right.end() && *it == y) ? static_cast<std::size_t>(it - right.begin())
                                         : right.size();
}

namespace {

std::vector<Labeling> normalized(std::span<const Labeling> labelings, std::size_t budget) {
  if (labelings.empty()) throw std::invalid_argument("OIG needs at least one labeling");
  const std::size_t n = labelings.front().size();
  if (n == 0) throw std::invalid_argument("labelings must be nonempty vectors");
  for (const auto& y : labelings) {
    if (y.size() != n) throw std::invalid_argument("labelings differ in length");
  }
  std::vector<Labeling> nodes(labelings.begin(), labelings.end());
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  if (nodes.size() > budget) throw BudgetExceeded("nodes", budget, nodes.size());
  return nodes;
}

BipartiteOig assemble(std::vector<Labeling> right, std::vector<std::int64_t> discounts,
                      std::vector<Label> label_space) {
  BipartiteOig g;
  g.n = right.front().size();
  g.label_space = std::move(label_space);
  g.discounts = std::move(discounts);

  std::vector<PartialLabeling> left;
  left.reserve(right.size() * g.n);
  for (const auto& y : right) {
    for (std::size_t i = 0; i < g.n; ++i) left.push_back(mask(y, i));
  }
  std::sort(left.begin(), left.end());
  left.erase(std::unique(left.begin(), left.end()), left.end());
  g.left = std::move(left);
  g.right = std::move(right);

  g.graph.left_adj.assign(g.left.size(), {});
  g.graph.right_adj.assign(g.right.size(), std::vector<std::size_t>(g.n));
  for (std::size_t r = 0; r < g.right.size(); ++r) {
    for (std::size_t i = 0; i < g.n; ++i) {
      const std::size_t l = g.find_left(mask(g.right[r], i));
      g.graph.right_adj[r][i] = l;
      g.graph.left_adj[l].push_back(r);  // r ascending, so lists stay sorted
    }
  }
  return g;
}

void check_labels(std::span<const Labeling> labelings, const std::vector<Label>& space) {
  for (const auto& y : labelings) {
    for (const auto& l : y) {
      if (!std::binary_search(space.begin(), space.end(), l)) {
        throw std::invalid_argument("label " + l.str() + " is not in the label space");
      }
    }
  }
}

std::vector<Label> sorted_space(std::span<const Label> label_space) {
  std::vector<Label> space(label_space.begin(), label_space.end());
  std::sort(space.begin(), space.end());
  space.erase(std::unique(space.begin(), space.end()), space.end());
  if (space.empty()) throw std::invalid_argument("label space is empty");
  return space;
}

}  // namespace

OneInclusionGraph build_oig(std::span<const Labeling> labelings, std::size_t node_budget) {
  OneInclusionGraph g;
  g.nodes = normalized(labelings, node_budget);
  g.n = g.nodes.front().size();
  g.discounts.assign(g.nodes.size(), 0);

  for (std::size_t i = 0; i < g.n; ++i) {
    std::map<PartialLabeling, std::vector<std::size_t>> buckets;
    for (std::size_t v = 0; v < g.nodes.size(); ++v) buckets[mask(g.nodes[v], i)].push_back(v);
    for (auto& [context, members] : buckets) {
      if (members.size() >= 2) g.hyperedges.push_back({i, std::move(members)});
    }
  }
  return g;
}

BipartiteOig build_bipartite_oig(std::span<const Labeling> labelings,
                                 std::span<const Label> label_space, std::size_t node_budget) {
  auto right = normalized(labelings, node_budget);
  auto space = sorted_space(label_space);
  check_labels(right, space);
  std::vector<std::int64_t> discounts(right.size(), 0);
  return assemble(std::move(right), std::move(discounts), std::move(space));
}

BipartiteOig build_agnostic_oig(std::span<const Labeling> class_restriction,
                                std::span<const Label> label_space, std::size_t n,
                                std::size_t node_budget) {
  if (class_restriction.empty()) {
    throw std::invalid_argument("agnostic OIG needs a nonempty class restriction");
  }
  if (n == 0) throw std::invalid_argument("agnostic OIG needs n >= 1");
  for (const auto& h : class_restriction) {
    if (h.size() != n) throw std::invalid_argument("class restriction has wrong length");
  }
  auto space = sorted_space(label_space);

  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (count > node_budget / space.size() + 1) {
      throw BudgetExceeded("agnostic-nodes", node_budget, count * space.size());
    }
    count *= space.size();
  }
  if (count > node_budget) throw BudgetExceeded("agnostic-nodes", node_budget, count);

  std::vector<Labeling> right;
  right.reserve(count);
  std::vector<std::size_t> digits(n, 0);
  for (std::size_t k = 0; k < count; ++k) {
    Labeling y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = space[digits[i]];
    right.push_back(std::move(y));
    for (std::size_t i = n; i-- > 0;) {
      if (++digits[i] < space.size()) break;
      digits[i] = 0;
    }
  }

  std::vector<std::int64_t> discounts;
  discounts.reserve(right.size());
  for (const auto& y : right) {
    discounts.push_back(static_cast<std::int64_t>(hamming_distance(y, class_restriction)));
  }
  return assemble(std::move(right), std::move(discounts), std::move(space));
}

bool incidence_consistency_check(const OneInclusionGraph& oig, const BipartiteOig& b) {
  if (b.n != oig.n || b.right != oig.nodes) return false;
  if (b.graph.left_adj.size() != b.left.size() || b.graph.right_adj.size() != b.right.size()) {
    return false;
  }
  if (!b.graph.mirrored()) return false;
  for (std::size_t l = 1; l < b.left.size(); ++l) {
    if (!(b.left[l - 1] < b.left[l])) return false;  // scenarios must be distinct
  }

  // Each full labeling meets exactly its n masks, one per coordinate.
  for (std::size_t r = 0; r < b.right.size(); ++r) {
    const auto& adj = b.graph.right_adj[r];
    if (adj.size() != b.n) return false;
    std::vector<bool> holes(b.n, false);
    for (auto l : adj) {
      const auto& p = b.left[l];
      if (p.size() != b.n || holes[p.hole()] || p != mask(b.right[r], p.hole())) return false;
      holes[p.hole()] = true;
    }
  }

  // Scenarios with >= 2 completions <-> hyperedges.
  std::set<std::pair<std::size_t, std::vector<std::size_t>>> hyperedges;
  std::set<std::pair<std::size_t, std::size_t>> covered;  // (coordinate, node)
  for (const auto& e : oig.hyperedges) {
    hyperedges.emplace(e.coordinate, e.members);
    for (auto v : e.members) covered.emplace(e.coordinate, v);
  }
  std::size_t matched = 0;
  for (std::size_t l = 0; l < b.left.size(); ++l) {
    const auto& adj = b.graph.left_adj[l];
    const std::size_t hole = b.left[l].hole();
    if (adj.empty()) return false;
    if (adj.size() == 1) {
      if (covered.count({hole, adj.front()}) != 0) return false;
      continue;
    }
    if (hyperedges.count({hole, adj}) == 0) return false;
    ++matched;
  }
  return matched == hyperedges.size() && hyperedges.size() == oig.hyperedges.size();
}

std::string dump(const OneInclusionGraph& g) {
  std::ostringstream out;
  out << "oig n=" << g.n << " nodes=" << g.nodes.size() << " hyperedges=" << g.hyperedges.size()
      << '\n';
  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    out << "node " << v << " labeling=" << to_string(g.nodes[v]) << " discount=" << g.discounts[v]
        << '\n';
  }
  for (std::size_t e = 0; e < g.hyperedges.size(); ++e) {
    out << "hyperedge " << e << " coordinate=" << g.hyperedges[e].coordinate << " members=";
    for (std::size_t k = 0; k < g.hyperedges[e].members.size(); ++k) {
      out << (k ? "," : "") << g.hyperedges[e].members[k];
    }
    out << '\n';
  }
  return out.str();
}

std::string dump(const BipartiteOig& g) {
  std::ostringstream out;
  out << "bipartite-oig n=" << g.n << " left=" << g.left.size() << " right=" << g.right.size()
      << " edges=" << g.graph.edge_count() << '\n';
  for (std::size_t r = 0; r < g.right.size(); ++r) {
    out << "right " << r << " labeling=" << to_string(g.right[r]) << " discount=" << g.discounts[r]
        << '\n';
  }
  for (std::size_t l = 0; l < g.left.size(); ++l) {
    out << "left " << l << " partial=" << g.left[l].str() << " neighbors=";
    const auto& adj = g.graph.left_adj[l];
    for (std::size_t k = 0; k < adj.size(); ++k) out << (k ? "," : "") << adj[k];
    out << '\n';
  }
  return out.str();
}

}  // namespace oiglab
