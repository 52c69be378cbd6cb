#pragma once

#include "oiglab/core.hpp"
#include "oiglab/matching.hpp"
#include "oiglab/oig.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>

namespace oiglab {

/// One round of the fill-in-the-blank game as the learner sees it.
struct Scenario {
  std::span<const Point> points;
  const PartialLabeling& observed;
  /// Hidden label, filled in by the evaluators. Only the adversarial-oracle
  /// tie-break reads it; it exists to build lower-bound instances.
  std::optional<Label> hidden_truth;
};

class TransductiveLearner {
 public:
  virtual ~TransductiveLearner() = default;
  virtual Label predict(const Scenario& scenario) const = 0;
  virtual std::string name() const = 0;
};

using LearnerPtr = std::shared_ptr<const TransductiveLearner>;

/// Fixed table from scenario to prediction. Scenarios missing from the
/// table get `fallback`.
class LookupLearner final : public TransductiveLearner {
 public:
  LookupLearner(std::map<PartialLabeling, Label> table, Label fallback, std::size_t n,
                std::string name = "lookup");

  Label predict(const Scenario& scenario) const override;
  std::string name() const override { return name_; }

  const std::map<PartialLabeling, Label>& table() const noexcept { return table_; }

 private:
  std::map<PartialLabeling, Label> table_;
  Label fallback_;
  std::size_t n_;
  std::string name_;
};

enum class TieBreak { first_lexicographic, adversarial_oracle, seeded_random };

struct TieBreakPolicy {
  TieBreak kind = TieBreak::first_lexicographic;
  std::uint64_t seed = 0;  // seeded_random only
};

/// Predicts the hole label of the right node each scenario is assigned to.
/// Off-support scenarios get the least label of Y.
LearnerPtr oig_learner(const OrientationResult& orientation, const BipartiteOig& g);

/// Orients the realizable bipartite OIG of each datapoint tuple it is asked
/// about (cached per tuple), so it works for any S within the node budget.
LearnerPtr optimal_oig_learner(FamilyPtr family, std::size_t node_budget = Budgets{}.nodes);

/// Empirical risk minimization over H|_S on the observed coordinates; the
/// policy picks among the minimizers' hole labels.
LearnerPtr erm_learner(FamilyPtr family, TieBreakPolicy policy, LossFunction loss,
                       std::size_t node_budget = Budgets{}.nodes);

/// Smallest closed box around the observed positives (label 1). Throws
/// RealizabilityViolation when an observed negative lies inside it.
LearnerPtr min_rectangle_learner(std::size_t dimension);

/// (1/n) sum_i loss(predict(S, y with i hidden), y_i), exactly.
Rational transductive_error(const TransductiveLearner& learner, std::span<const Point> points,
                            const Labeling& truth, const LossFunction& loss);

enum class Setting { realizable, agnostic };

struct WorstCase {
  Rational error;
  Labeling witness;  // first maximizer in lexicographic order
};

/// Realizable: max over y in H|_S of the transductive error. Agnostic: max
/// over y in Y^n of the transductive error minus best-in-class loss.
WorstCase worst_case_error(const TransductiveLearner& learner, const LabelingFamily& family,
                           std::span<const Point> points, Setting setting,
                           const LossFunction& loss, const Budgets& budgets = Budgets{});

/// FNV-1a over the datapoints, the hole and the observed labels. Seeded
/// learners key their random streams on it.
std::uint64_t scenario_key(const Scenario& scenario);

/// Y^n in lexicographic order; throws BudgetExceeded past `budget`.
std::vector<Labeling> all_labelings(std::span<const Label> label_space, std::size_t n,
                                    std::size_t budget);

}  // namespace oiglab
