#include "oiglab/fds.hpp"

#include "oiglab/errors.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace oiglab {

Fds::Fds(std::vector<FdsInput> inputs, std::vector<std::string> outputs, std::vector<FdsEdge> edges)
    : inputs_(std::move(inputs)),
      outputs_(std::move(outputs)),
      edges_(std::move(edges)),
      left_edges_(inputs_.size()),
      right_edges_(outputs_.size()) {
  for (const auto& in : inputs_) {
    if (in.domain.empty()) throw std::invalid_argument("input " + in.name + " has an empty domain");
  }
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& edge = edges_[e];
    if (edge.left >= inputs_.size() || edge.right >= outputs_.size()) {
      throw std::invalid_argument("edge " + std::to_string(e) + " has an endpoint out of range");
    }
    if (edge.costs.size() != inputs_[edge.left].domain.size()) {
      throw std::invalid_argument("edge " + std::to_string(e) + " cost table has " +
                                  std::to_string(edge.costs.size()) + " entries, domain of " +
                                  inputs_[edge.left].name + " has " +
                                  std::to_string(inputs_[edge.left].domain.size()));
    }
    if (!seen.emplace(edge.left, edge.right).second) {
      throw std::invalid_argument("duplicate edge " + inputs_[edge.left].name + " -> " +
                                  outputs_[edge.right]);
    }
    left_edges_[edge.left].push_back(e);
    right_edges_[edge.right].push_back(e);
  }
  for (std::size_t b = 0; b < outputs_.size(); ++b) {
    if (right_edges_[b].empty()) throw std::invalid_argument("output " + outputs_[b] + " has no edges");
  }
}

std::vector<Rational> evaluate_outputs(const Fds& fds, const FdsAssignment& u) {
  if (u.size() != fds.left_count()) throw std::invalid_argument("assignment is not total");
  for (std::size_t a = 0; a < u.size(); ++a) {
    if (u[a] >= fds.inputs()[a].domain.size()) {
      throw std::invalid_argument("value out of domain for input " + fds.inputs()[a].name);
    }
  }
  std::vector<Rational> out(fds.right_count(), Rational(0));
  for (std::size_t b = 0; b < fds.right_count(); ++b) {
    const auto& incident = fds.right_edges(b);
    for (auto e : incident) out[b] += fds.edges()[e].costs[u[fds.edges()[e].left]];
    out[b] /= static_cast<std::int64_t>(incident.size());
  }
  return out;
}

Rational max_output(const Fds& fds, const FdsAssignment& u) {
  const auto v = evaluate_outputs(fds, u);
  return *std::max_element(v.begin(), v.end());
}

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw Error("FDS costs overflow 64-bit scaling");
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw Error("FDS costs overflow 64-bit scaling");
  return out;
}

/// Costs over a common denominator, with dominated values removed.
struct Prepared {
  std::int64_t scale = 1;
  std::vector<std::vector<std::int64_t>> cost;  // [edge][domain index]
  std::vector<std::int64_t> min_cost;           // [edge], over live values
  std::vector<std::vector<std::size_t>> live;   // [input], in branching order
};

Prepared prepare(const Fds& fds) {
  Prepared p;
  for (const auto& e : fds.edges()) {
    for (const auto& c : e.costs) {
      p.scale = checked_mul(p.scale / std::gcd(p.scale, c.denominator()), c.denominator());
    }
  }
  for (const auto& e : fds.edges()) {
    auto& row = p.cost.emplace_back();
    for (const auto& c : e.costs) row.push_back(checked_mul(c.numerator(), p.scale / c.denominator()));
  }

  p.live.resize(fds.left_count());
  for (std::size_t a = 0; a < fds.left_count(); ++a) {
    const auto& incident = fds.left_edges(a);
    const std::size_t size = fds.inputs()[a].domain.size();
    // z is dropped when some z' costs no more on every edge, strictly less
    // somewhere or with a smaller index.
    for (std::size_t z = 0; z < size; ++z) {
      bool dominated = false;
      for (std::size_t w = 0; w < size && !dominated; ++w) {
        if (w == z) continue;
        bool no_worse = true;
        bool better = false;
        for (auto e : incident) {
          if (p.cost[e][w] > p.cost[e][z]) no_worse = false;
          if (p.cost[e][w] < p.cost[e][z]) better = true;
        }
        dominated = no_worse && (better || w < z);
      }
      if (!dominated) p.live[a].push_back(z);
    }
  }

  p.min_cost.resize(fds.edges().size());
  for (std::size_t e = 0; e < fds.edges().size(); ++e) {
    const auto& live = p.live[fds.edges()[e].left];
    std::int64_t m = p.cost[e][live.front()];
    for (auto z : live) m = std::min(m, p.cost[e][z]);
    p.min_cost[e] = m;
  }

  // Cheapest values first, measured by the share of each output they use.
  for (std::size_t a = 0; a < fds.left_count(); ++a) {
    std::vector<std::pair<double, std::size_t>> keyed;
    for (auto z : p.live[a]) {
      double used = 0;
      for (auto e : fds.left_edges(a)) {
        used += static_cast<double>(p.cost[e][z] - p.min_cost[e]) /
                static_cast<double>(fds.right_edges(fds.edges()[e].right).size());
      }
      keyed.emplace_back(used, z);
    }
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t k = 0; k < keyed.size(); ++k) p.live[a][k] = keyed[k].second;
  }
  return p;
}

class Search {
 public:
  Search(const Fds& fds, const Prepared& p, std::vector<std::int64_t> slack, std::size_t budget)
      : fds_(fds), p_(p), slack_(std::move(slack)), budget_(budget) {}

  EpsilonOutcome run() {
    for (std::size_t b = 0; b < slack_.size(); ++b) {
      if (slack_[b] < 0) return FdsInfeasible{{b}};
    }
    FdsAssignment u(fds_.left_count(), 0);
    std::vector<std::size_t> order;
    for (std::size_t a = 0; a < fds_.left_count(); ++a) {
      if (fds_.left_edges(a).empty()) {
        u[a] = p_.live[a].front();
      } else {
        order.push_back(a);
      }
    }
    std::stable_sort(order.begin(), order.end(), [this](std::size_t x, std::size_t y) {
      return p_.live[x].size() < p_.live[y].size();
    });

    assigned_.assign(fds_.left_count(), false);
    std::vector<std::size_t> cursor(order.size() + 1, 0);
    std::size_t depth = 0;
    while (depth < order.size()) {
      const std::size_t a = order[depth];
      bool placed = false;
      while (cursor[depth] < p_.live[a].size()) {
        if (++nodes_ > budget_) throw BudgetExceeded("fds-search-nodes", budget_, nodes_);
        const std::size_t z = p_.live[a][cursor[depth]];
        if (try_place(a, z)) {
          u[a] = z;
          placed = true;
          break;
        }
        ++cursor[depth];
      }
      if (placed) {
        cursor[++depth] = 0;
        continue;
      }
      if (depth == 0) return FdsInfeasible{{certificate_.begin(), certificate_.end()}};
      --depth;
      unplace(order[depth], u[order[depth]]);
      ++cursor[depth];
    }
    return u;
  }

 private:
  std::int64_t delta(std::size_t e, std::size_t z) const { return p_.cost[e][z] - p_.min_cost[e]; }

  /// Output refusing a = z given the current slack, if any.
  std::optional<std::size_t> blocker(std::size_t a, std::size_t z) const {
    for (auto e : fds_.left_edges(a)) {
      const auto b = fds_.edges()[e].right;
      if (delta(e, z) > slack_[b]) return b;
    }
    return std::nullopt;
  }

  bool try_place(std::size_t a, std::size_t z) {
    if (const auto b = blocker(a, z)) {
      certificate_.insert(*b);
      return false;
    }
    apply(a, z, -1);
    assigned_[a] = true;
    // Forward check: every unassigned input sharing a tightened output
    // must keep at least one admissible value.
    for (auto e : fds_.left_edges(a)) {
      if (delta(e, z) == 0) continue;
      for (auto f : fds_.right_edges(fds_.edges()[e].right)) {
        const auto other = fds_.edges()[f].left;
        if (assigned_[other]) continue;
        std::vector<std::size_t> blockers;
        for (auto w : p_.live[other]) {
          const auto b = blocker(other, w);
          if (!b) break;
          blockers.push_back(*b);
        }
        if (blockers.size() == p_.live[other].size()) {
          certificate_.insert(blockers.begin(), blockers.end());
          unplace(a, z);
          return false;
        }
      }
    }
    return true;
  }

  void unplace(std::size_t a, std::size_t z) {
    apply(a, z, +1);
    assigned_[a] = false;
  }

  void apply(std::size_t a, std::size_t z, std::int64_t sign) {
    for (auto e : fds_.left_edges(a)) slack_[fds_.edges()[e].right] += sign * delta(e, z);
  }

  const Fds& fds_;
  const Prepared& p_;
  std::vector<std::int64_t> slack_;
  std::vector<bool> assigned_;
  std::set<std::size_t> certificate_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
};

EpsilonOutcome solve(const Fds& fds, const Prepared& p, const Rational& eps, std::size_t budget) {
  std::vector<std::int64_t> slack(fds.right_count());
  for (std::size_t b = 0; b < fds.right_count(); ++b) {
    const auto& incident = fds.right_edges(b);
    const auto deg = static_cast<std::int64_t>(incident.size());
    const Rational limit = eps * Rational(checked_mul(deg, p.scale));
    std::int64_t base = 0;
    for (auto e : incident) base = checked_add(base, p.min_cost[e]);
    slack[b] = floor_of(limit) - base;
  }
  return Search(fds, p, std::move(slack), budget).run();
}

}  // namespace

EpsilonOutcome epsilon_assignment(const Fds& fds, const Rational& eps, std::size_t search_budget) {
  return solve(fds, prepare(fds), eps, search_budget);
}

MinMaxResult min_max_value(const Fds& fds, std::size_t search_budget) {
  const Prepared p = prepare(fds);
  if (fds.right_count() == 0) {
    FdsAssignment u(fds.left_count());
    for (std::size_t a = 0; a < u.size(); ++a) u[a] = p.live[a].front();
    return {Rational(0), u};
  }

  // Achievable per-output sums over live values, then the averages at or
  // above the largest per-output minimum.
  std::vector<Rational> candidates;
  Rational lower(0);
  bool first = true;
  for (std::size_t b = 0; b < fds.right_count(); ++b) {
    std::set<std::int64_t> sums{0};
    for (auto e : fds.right_edges(b)) {
      std::set<std::int64_t> next;
      for (auto s : sums) {
        for (auto z : p.live[fds.edges()[e].left]) next.insert(checked_add(s, p.cost[e][z]));
      }
      if (next.size() > search_budget) {
        throw BudgetExceeded("fds-search-nodes", search_budget, next.size());
      }
      sums = std::move(next);
    }
    const auto denom =
        checked_mul(static_cast<std::int64_t>(fds.right_edges(b).size()), p.scale);
    for (auto s : sums) candidates.emplace_back(s, denom);
    const Rational least(*sums.begin(), denom);
    if (first || least > lower) lower = least;
    first = false;
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  candidates.erase(candidates.begin(),
                   std::lower_bound(candidates.begin(), candidates.end(), lower));

  // The largest candidate bounds every output, so it is always feasible.
  std::size_t lo = 0;
  std::size_t hi = candidates.size() - 1;
  std::optional<FdsAssignment> witness;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    auto outcome = solve(fds, p, candidates[mid], search_budget);
    if (auto* u = std::get_if<FdsAssignment>(&outcome)) {
      witness = std::move(*u);
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (!witness || max_output(fds, *witness) != candidates[lo]) {
    auto outcome = solve(fds, p, candidates[lo], search_budget);
    witness = std::get<FdsAssignment>(std::move(outcome));
  }
  return {max_output(fds, *witness), std::move(*witness)};
}

Fds encode_matching(const BipartiteGraph& g) {
  std::vector<FdsInput> inputs;
  std::vector<std::size_t> input_of(g.left_count(), g.left_count());
  for (std::size_t a = 0; a < g.left_count(); ++a) {
    if (g.left_adj[a].empty()) continue;  // no domain; cannot serve any output
    input_of[a] = inputs.size();
    FdsInput in{"a" + std::to_string(a), {}};
    for (auto b : g.left_adj[a]) in.domain.emplace_back(static_cast<std::int64_t>(b));
    inputs.push_back(std::move(in));
  }
  std::vector<std::string> outputs;
  std::vector<FdsEdge> edges;
  for (std::size_t b = 0; b < g.right_count(); ++b) {
    if (g.right_adj[b].empty()) throw std::invalid_argument("right node " + std::to_string(b) + " is isolated");
    outputs.push_back("b" + std::to_string(b));
    const Rational share(1, static_cast<std::int64_t>(g.right_adj[b].size()));
    for (auto a : g.right_adj[b]) {
      FdsEdge e{input_of[a], b, {}};
      for (auto z : g.left_adj[a]) e.costs.push_back(Rational(z != b ? 1 : 0) + share);
      edges.push_back(std::move(e));
    }
  }
  return Fds(std::move(inputs), std::move(outputs), std::move(edges));
}

TransductiveFds encode_transductive(const LabelingFamily& family, std::span<const Point> points,
                                    Setting setting, const LossFunction& loss,
                                    const Budgets& budgets) {
  const auto h = family.restrict_to(points, budgets.nodes);
  if (h.empty()) throw std::invalid_argument("family has no restriction to the datapoints");
  const auto labels = family.label_space();
  BipartiteOig oig = setting == Setting::realizable
                         ? build_bipartite_oig(h, labels, budgets.nodes)
                         : build_agnostic_oig(h, labels, points.size(), budgets.agnostic_nodes);

  std::vector<FdsInput> inputs;
  for (const auto& p : oig.left) inputs.push_back({p.str(), oig.label_space});
  std::vector<std::string> outputs;
  std::vector<FdsEdge> edges;
  for (std::size_t r = 0; r < oig.right.size(); ++r) {
    const auto& y = oig.right[r];
    outputs.push_back(to_string(y));
    const Rational offset =
        setting == Setting::agnostic ? best_in_class_loss(h, y, loss) : Rational(0);
    for (auto l : oig.graph.right_adj[r]) {
      FdsEdge e{l, r, {}};
      const auto& truth = y[oig.left[l].hole()];
      for (const auto& z : oig.label_space) e.costs.push_back(loss(z, truth) - offset);
      edges.push_back(std::move(e));
    }
  }
  Fds fds(std::move(inputs), std::move(outputs), std::move(edges));
  return {std::move(fds), std::move(oig)};
}

LearnerPtr learner_from_assignment(const TransductiveFds& encoded, const FdsAssignment& u) {
  const auto& oig = encoded.oig;
  if (u.size() != oig.left.size()) throw std::invalid_argument("assignment is not total");
  std::map<PartialLabeling, Label> table;
  for (std::size_t l = 0; l < u.size(); ++l) {
    table.emplace(oig.left[l], encoded.fds.inputs()[l].domain.at(u[l]));
  }
  return std::make_shared<LookupLearner>(std::move(table), oig.label_space.front(), oig.n, "fds");
}

SubFds finite_sub_fds(const Fds& fds, std::span<const std::size_t> right_subset) {
  if (right_subset.empty()) throw std::invalid_argument("sub-FDS needs at least one output");
  std::vector<std::size_t> right_local(fds.right_count(), fds.right_count());
  for (std::size_t k = 0; k < right_subset.size(); ++k) {
    const auto b = right_subset[k];
    if (b >= fds.right_count()) throw std::out_of_range("output index out of range");
    if (right_local[b] != fds.right_count()) throw std::invalid_argument("repeated output index");
    right_local[b] = k;
  }
  std::vector<std::size_t> lefts;
  for (auto b : right_subset) {
    for (auto e : fds.right_edges(b)) lefts.push_back(fds.edges()[e].left);
  }
  std::sort(lefts.begin(), lefts.end());
  lefts.erase(std::unique(lefts.begin(), lefts.end()), lefts.end());

  SubFds sub{Fds({}, {}, {}), lefts, {right_subset.begin(), right_subset.end()}};
  std::vector<FdsInput> inputs;
  for (auto a : lefts) inputs.push_back(fds.inputs()[a]);
  std::vector<std::string> outputs;
  std::vector<FdsEdge> edges;
  for (std::size_t k = 0; k < right_subset.size(); ++k) {
    outputs.push_back(fds.outputs()[right_subset[k]]);
    for (auto e : fds.right_edges(right_subset[k])) {
      const auto& edge = fds.edges()[e];
      const auto local = static_cast<std::size_t>(
          std::lower_bound(lefts.begin(), lefts.end(), edge.left) - lefts.begin());
      edges.push_back({local, k, edge.costs});
    }
  }
  sub.fds = Fds(std::move(inputs), std::move(outputs), std::move(edges));
  return sub;
}

FdsCompactnessReport finite_compactness(const Fds& fds, const Rational& eps,
                                        std::size_t subset_size_cap, std::size_t max_subsets,
                                        std::size_t search_budget) {
  FdsCompactnessReport report;
  report.eps = eps;
  report.whole_feasible =
      std::holds_alternative<FdsAssignment>(epsilon_assignment(fds, eps, search_budget));

  const std::size_t R = fds.right_count();
  const std::size_t cap = std::min(subset_size_cap, R);
  for (std::size_t size = 1; size <= cap; ++size) {
    std::vector<std::size_t> subset(size);
    std::iota(subset.begin(), subset.end(), 0);
    while (true) {
      if (++report.subsets_checked > max_subsets) {
        throw BudgetExceeded("compactness-subsets", max_subsets, report.subsets_checked);
      }
      const auto sub = finite_sub_fds(fds, subset);
      if (!std::holds_alternative<FdsAssignment>(epsilon_assignment(sub.fds, eps, search_budget))) {
        report.subsets_feasible = false;
        report.first_infeasible = subset;
        return report;
      }
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
