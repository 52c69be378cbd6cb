#pragma once

#include "oiglab/bipartite_graph.hpp"
#include "oiglab/core.hpp"
#include "oiglab/learners.hpp"
#include "oiglab/oig.hpp"

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace oiglab {

/// Input variable with a finite enumerated domain.
struct FdsInput {
  std::string name;
  std::vector<Label> domain;
};

/// Edge (left, right) with its cost table: costs[k] = f_e(domain[k]).
struct FdsEdge {
  std::size_t left = 0;
  std::size_t right = 0;
  std::vector<Rational> costs;
};

/// Functional dependency structure: each output variable is the average of
/// its incident edge costs evaluated at the chosen input values.
class Fds {
 public:
  /// Throws std::invalid_argument on an empty domain, a cost table of the
  /// wrong size, a duplicate edge, an out-of-range endpoint or an output
  /// without edges.
  Fds(std::vector<FdsInput> inputs, std::vector<std::string> outputs, std::vector<FdsEdge> edges);

  const std::vector<FdsInput>& inputs() const noexcept { return inputs_; }
  const std::vector<std::string>& outputs() const noexcept { return outputs_; }
  const std::vector<FdsEdge>& edges() const noexcept { return edges_; }

  std::size_t left_count() const noexcept { return inputs_.size(); }
  std::size_t right_count() const noexcept { return outputs_.size(); }

  /// Edge indices incident to a left or right node, ascending.
  const std::vector<std::size_t>& left_edges(std::size_t a) const { return left_edges_.at(a); }
  const std::vector<std::size_t>& right_edges(std::size_t b) const { return right_edges_.at(b); }

 private:
  std::vector<FdsInput> inputs_;
  std::vector<std::string> outputs_;
  std::vector<FdsEdge> edges_;
  std::vector<std::vector<std::size_t>> left_edges_;
  std::vector<std::vector<std::size_t>> right_edges_;
};

/// Per input, an index into its domain.
using FdsAssignment = std::vector<std::size_t>;

/// v_b for every output, exactly.
std::vector<Rational> evaluate_outputs(const Fds& fds, const FdsAssignment& u);

/// max_b v_b.
Rational max_output(const Fds& fds, const FdsAssignment& u);

/// Outputs whose constraints refuted every branch of the search. The
/// sub-FDS they induce has no eps-assignment either.
struct FdsInfeasible {
  std::vector<std::size_t> certificate;  // ascending right indices
};

using EpsilonOutcome = std::variant<FdsAssignment, FdsInfeasible>;

/// Exact backtracking search for u with every v_b <= eps. Values that are
/// dominated on every incident edge by another value of the same input are
/// discarded first; inputs are then branched in order of ascending domain
/// size, ties by index. A branch is cut as soon as some output cannot stay
/// within eps even with its unassigned edges at their cheapest values.
/// Throws BudgetExceeded("fds-search-nodes") past `search_budget` nodes.
EpsilonOutcome epsilon_assignment(const Fds& fds, const Rational& eps,
                                  std::size_t search_budget = Budgets{}.search_nodes);

struct MinMaxResult {
  Rational value;
  FdsAssignment witness;
};

/// Least achievable max output. The optimum is one of the per-output
/// averages of cost-table values, so the search runs over that finite set.
MinMaxResult min_max_value(const Fds& fds, std::size_t search_budget = Budgets{}.search_nodes);

/// Inputs are the left nodes of g that have neighbors, with domain their
/// neighbor indices; edge (a, b) costs [z != b] + 1/deg(b). The result has a
/// 1-assignment iff g has a matching saturating its right side.
/// Throws std::invalid_argument on an isolated right node.
Fds encode_matching(const BipartiteGraph& g);

/// FDS of a transductive problem together with the bipartite OIG it was
/// read from: input l is scenario oig.left[l] with domain Y, output r is the
/// labeling oig.right[r].
struct TransductiveFds {
  Fds fds;
  BipartiteOig oig;
};

/// Realizable: outputs are H|_S and edge costs loss(z, y_i). Agnostic:
/// outputs are Y^n and costs loss(z, y_i) minus the best-in-class loss of y.
TransductiveFds encode_transductive(const LabelingFamily& family, std::span<const Point> points,
                                    Setting setting, const LossFunction& loss,
                                    const Budgets& budgets = Budgets{});

/// The learner that predicts u at each scenario (least label off support).
LearnerPtr learner_from_assignment(const TransductiveFds& encoded, const FdsAssignment& u);

struct SubFds {
  Fds fds;
  std::vector<std::size_t> left_origin;   // sub input -> original input
  std::vector<std::size_t> right_origin;  // sub output -> original output
};

/// Outputs in `right_subset`, every input adjacent to one of them, and the
/// edges between. Domains are unchanged.
SubFds finite_sub_fds(const Fds& fds, std::span<const std::size_t> right_subset);

struct FdsCompactnessReport {
  Rational eps;
  bool whole_feasible = false;
  bool subsets_feasible = true;
  std::size_t subsets_checked = 0;
  std::optional<std::vector<std::size_t>> first_infeasible;

  bool consistent() const { return whole_feasible == subsets_feasible; }
};

/// Solves the whole FDS and every sub-FDS on at most `subset_size_cap`
/// outputs, by size then lexicographically, stopping at the first
/// infeasible one. Throws BudgetExceeded("compactness-subsets") when more
/// than `max_subsets` subsets would be needed.
FdsCompactnessReport finite_compactness(const Fds& fds, const Rational& eps,
                                        std::size_t subset_size_cap,
                                        std::size_t max_subsets = std::size_t{1} << 20,
                                        std::size_t search_budget = Budgets{}.search_nodes);

}  // namespace oiglab
