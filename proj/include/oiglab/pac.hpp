#pragma once

#include "oiglab/core.hpp"
#include "oiglab/learners.hpp"
#include "oiglab/random.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace oiglab {

struct Example {
  Point x;
  Label y;

  friend bool operator==(const Example&, const Example&) = default;
};

/// Distribution on X x Y with finite support and exact rational weights.
class FiniteDistribution {
 public:
  /// Weights must be nonnegative and sum to exactly 1.
  FiniteDistribution(std::vector<Example> support, std::vector<Rational> weights);
  static FiniteDistribution uniform(std::vector<Example> support);

  const std::vector<Example>& support() const noexcept { return support_; }
  const std::vector<Rational>& weights() const noexcept { return weights_; }

  /// Distinct support points in order of first appearance.
  std::vector<Point> support_points() const;

  /// Exact draw: one uniform integer below the common weight denominator.
  const Example& sample(Rng& rng) const;
  std::vector<Example> sample(Rng& rng, std::size_t count) const;

 private:
  std::vector<Example> support_;
  std::vector<Rational> weights_;
  std::vector<std::int64_t> cumulative_;  // scaled by denominator_
  std::int64_t denominator_ = 1;
};

using Predictor = std::function<Label(const Point&)>;

class PacLearner {
 public:
  virtual ~PacLearner() = default;
  virtual Predictor train(std::span<const Example> samples) const = 0;
  virtual std::string name() const = 0;
};

using PacLearnerPtr = std::shared_ptr<const PacLearner>;

/// E_{(x,y) ~ D} loss(f(x), y), summed exactly over the support.
Rational true_loss(const Predictor& f, const FiniteDistribution& dist, const LossFunction& loss);

/// min over h in H|_supp of the true loss of h.
Rational best_in_class_true_loss(const LabelingFamily& family, const FiniteDistribution& dist,
                                 const LossFunction& loss,
                                 std::size_t node_budget = Budgets{}.nodes);

PacLearnerPtr constant_pac_learner(Label value);

/// Predicts the label of the nearest training point (squared Euclidean
/// distance, earliest sample on ties). With no samples it predicts the
/// least label of `label_space`.
PacLearnerPtr nearest_neighbor_pac_learner(std::vector<Label> label_space);

/// Bounding box of the positive samples; everything is negative when there
/// are none.
PacLearnerPtr min_rectangle_pac_learner(std::size_t dimension);

/// Trains `pac` on n draws with replacement from the n - 1 observed
/// examples and predicts the test point. The draws come from a stream keyed
/// by (seed, scenario), so predict stays a pure function.
LearnerPtr pac_to_transductive(PacLearnerPtr pac, std::uint64_t seed);

struct ReductionConfig {
  Rational delta{1, 10};
  std::size_t block_size = 0;  // datapoints per transductive call, test point excluded
  double c1 = 8;
  double c2 = 4;
  Rational holdout_eps{1, 10};
  std::optional<std::size_t> repetitions_override;
  std::optional<std::size_t> holdout_override;
  LossFunction loss = LossFunction::zero_one();

  /// r = ceil(c1 ln(1/delta)), at least 1.
  std::size_t repetitions() const;
  /// m = ceil(c2 ln(r/delta) / holdout_eps).
  std::size_t holdout_size() const;
  std::size_t required_samples() const { return repetitions() * block_size + holdout_size(); }
};

/// Splits the samples into r blocks followed by a holdout of size m. Block j
/// yields f_j(x) = t.predict(block_j + x, hole at x); the f_j with least
/// holdout loss wins, first index on ties. Extra samples are ignored.
/// train throws std::invalid_argument on too few samples.
PacLearnerPtr transductive_to_pac(LearnerPtr transductive, ReductionConfig config);

struct PacEstimate {
  std::vector<Rational> per_trial;  // trial order
  std::vector<Rational> sorted;
  Rational mean;

  /// Nearest-rank quantile, p in (0, 1].
  Rational quantile(const Rational& p) const;
  /// Fraction of trials whose loss exceeds `threshold`.
  Rational exceedance(const Rational& threshold) const;
};

/// Per trial t: draw n samples from stream (seed, t), train, record the exact
/// true loss. The agnostic setting subtracts the best-in-class true loss of
/// `family`, which must then be given. Trials run concurrently; results do
/// not depend on scheduling.
PacEstimate pac_error_estimate(const PacLearner& pac, const FiniteDistribution& dist,
                               std::size_t n, std::size_t trials, std::uint64_t seed,
                               Setting setting, const LossFunction& loss,
                               const LabelingFamily* family = nullptr,
                               const Budgets& budgets = Budgets{});

/// Average over all orderings of the dataset of the loss on the last point
/// when the learner sees the rest: the uniform without-replacement
/// experiment, enumerated exhaustively. Capped at 8 points.
Rational leave_one_out_error(const TransductiveLearner& learner, const Dataset& data,
                             const LossFunction& loss);

}  // namespace oiglab
