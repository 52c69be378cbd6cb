#include "oiglab/learners.hpp"

#include "oiglab/errors.hpp"
#include "oiglab/random.hpp"

#include <algorithm>
#include <stdexcept>

namespace oiglab {

LookupLearner::LookupLearner(std::map<PartialLabeling, Label> table, Label fallback,
                             std::size_t n, std::string name)
    : table_(std::move(table)), fallback_(fallback), n_(n), name_(std::move(name)) {}

Label LookupLearner::predict(const Scenario& scenario) const {
  if (scenario.observed.size() != n_) {
    throw std::invalid_argument("scenario has " + std::to_string(scenario.observed.size()) +
                                " coordinates, learner expects " + std::to_string(n_));
  }
  const auto it = table_.find(scenario.observed);
  return it == table_.end() ? fallback_ : it->second;
}

namespace {

std::map<PartialLabeling, Label> orientation_table(const OrientationResult& orientation,
                                                   const BipartiteOig& g) {
  if (orientation.assignment.size() != g.left.size()) {
    throw std::invalid_argument("orientation does not belong to this bipartite OIG");
  }
  std::map<PartialLabeling, Label> table;
  for (std::size_t l = 0; l < g.left.size(); ++l) {
    const std::size_t r = orientation.assignment[l];
    if (!std::binary_search(g.graph.left_adj[l].begin(), g.graph.left_adj[l].end(), r)) {
      throw std::invalid_argument("orientation assigns a scenario to a non-neighbor");
    }
    table.emplace_hint(table.end(), g.left[l], g.right[r][g.left[l].hole()]);
  }
  return table;
}

class OptimalOigLearner final : public TransductiveLearner {
 public:
  OptimalOigLearner(FamilyPtr family, std::size_t budget)
      : family_(std::move(family)), budget_(budget), labels_(family_->label_space()) {}

  Label predict(const Scenario& scenario) const override {
    if (scenario.points.size() != scenario.observed.size()) {
      throw std::invalid_argument("scenario points and labels differ in length");
    }
    const auto table = table_for(scenario.points);
    const auto it = table->find(scenario.observed);
    return it == table->end() ? labels_.front() : it->second;
  }

  std::string name() const override { return "oig"; }

 private:
  using Table = std::map<PartialLabeling, Label>;
  static constexpr std::size_t kCacheLimit = 4096;

  std::shared_ptr<const Table> table_for(std::span<const Point> points) const {
    std::vector<Point> key(points.begin(), points.end());
    {
      std::lock_guard lock(mutex_);
      if (const auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    const auto h = family_->restrict_to(points, budget_);
    const auto g = build_bipartite_oig(h, labels_, budget_);
    auto table = std::make_shared<const Table>(orientation_table(optimal_orientation(g), g));
    std::lock_guard lock(mutex_);
    if (cache_.size() >= kCacheLimit) cache_.clear();
    cache_.emplace(std::move(key), table);
    return table;
  }

  FamilyPtr family_;
  std::size_t budget_;
  std::vector<Label> labels_;
  mutable std::mutex mutex_;
  mutable std::map<std::vector<Point>, std::shared_ptr<const Table>> cache_;
};

class ErmLearner final : public TransductiveLearner {
 public:
  ErmLearner(FamilyPtr family, TieBreakPolicy policy, LossFunction loss, std::size_t budget)
      : family_(std::move(family)), policy_(policy), loss_(std::move(loss)), budget_(budget) {}

  Label predict(const Scenario& scenario) const override {
    const auto& observed = scenario.observed;
    if (scenario.points.size() != observed.size()) {
      throw std::invalid_argument("scenario points and labels differ in length");
    }
    const auto h = family_->restrict_to(scenario.points, budget_);
    if (h.empty()) throw std::invalid_argument("ERM over an empty restriction");

    std::optional<Rational> best;
    std::vector<Label> candidates;
    for (const auto& f : h) {
      Rational risk(0);
      for (std::size_t j = 0; j < f.size(); ++j) {
        if (j != observed.hole()) risk += loss_(f[j], observed.at(j));
      }
      if (!best || risk < *best) {
        best = risk;
        candidates.clear();
      }
      if (risk == *best) candidates.push_back(f[observed.hole()]);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    return choose(candidates, scenario);
  }

  std::string name() const override { return "erm"; }

 private:
  Label choose(const std::vector<Label>& candidates, const Scenario& scenario) const {
    switch (policy_.kind) {
      case TieBreak::first_lexicographic:
        return candidates.front();
      case TieBreak::adversarial_oracle: {
        if (!scenario.hidden_truth) return candidates.front();
        Label worst = candidates.front();
        Rational worst_loss = loss_(worst, *scenario.hidden_truth);
        for (const auto& c : candidates) {
          if (const auto l = loss_(c, *scenario.hidden_truth); l > worst_loss) {
            worst = c;
            worst_loss = l;
          }
        }
        return worst;
      }
      case TieBreak::seeded_random: {
        auto rng = stream_generator(policy_.seed, scenario_key(scenario));
        return candidates[uniform_below(rng, candidates.size())];
      }
    }
    return candidates.front();
  }

  FamilyPtr family_;
  TieBreakPolicy policy_;
  LossFunction loss_;
  std::size_t budget_;
};

class MinRectangleLearner final : public TransductiveLearner {
 public:
  explicit MinRectangleLearner(std::size_t dimension) : dimension_(dimension) {
    if (dimension_ == 0) throw std::invalid_argument("rectangle dimension must be positive");
  }

  Label predict(const Scenario& scenario) const override {
    const auto& points = scenario.points;
    const auto& observed = scenario.observed;
    if (points.size() != observed.size()) {
      throw std::invalid_argument("scenario points and labels differ in length");
    }
    const Label plus(1);
    const Label minus(0);
    std::vector<Rational> lo, hi;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (points[j].size() != dimension_) {
        throw std::invalid_argument("point " + to_string(points[j]) + " has wrong dimension");
      }
      if (j == observed.hole() || observed.at(j) != plus) continue;
      if (lo.empty()) {
        lo = hi = points[j];
      } else {
        for (std::size_t k = 0; k < dimension_; ++k) {
          lo[k] = std::min(lo[k], points[j][k]);
          hi[k] = std::max(hi[k], points[j][k]);
        }
      }
    }
    if (lo.empty()) return minus;

    const auto inside = [&](const Point& x) {
      for (std::size_t k = 0; k < dimension_; ++k) {
        if (x[k] < lo[k] || hi[k] < x[k]) return false;
      }
      return true;
    };
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j != observed.hole() && observed.at(j) != plus && inside(points[j])) {
        throw RealizabilityViolation("observed negative at " + to_string(points[j]) +
                                     " lies inside the positive bounding box");
      }
    }
    return inside(points[observed.hole()]) ? plus : minus;
  }

  std::string name() const override { return "minrect"; }

 private:
  std::size_t dimension_;
};

}  // namespace

std::uint64_t scenario_key(const Scenario& scenario) {
  std::uint64_t key = 1469598103934665603ULL;
  const auto mix = [&key](std::int64_t v) {
    key ^= static_cast<std::uint64_t>(v);
    key *= 1099511628211ULL;
  };
  const auto mix_rational = [&mix](const Rational& q) {
    mix(q.numerator());
    mix(q.denominator());
  };
  for (const auto& x : scenario.points) {
    mix(static_cast<std::int64_t>(x.size()));
    for (const auto& c : x) mix_rational(c);
  }
  mix(static_cast<std::int64_t>(scenario.observed.hole()));
  for (const auto& l : scenario.observed.entries()) mix_rational(l.value());
  return key;
}

LearnerPtr oig_learner(const OrientationResult& orientation, const BipartiteOig& g) {
  return std::make_shared<LookupLearner>(orientation_table(orientation, g), g.label_space.front(),
                                         g.n, "oig");
}

LearnerPtr optimal_oig_learner(FamilyPtr family, std::size_t node_budget) {
  return std::make_shared<OptimalOigLearner>(std::move(family), node_budget);
}

LearnerPtr erm_learner(FamilyPtr family, TieBreakPolicy policy, LossFunction loss,
                       std::size_t node_budget) {
  return std::make_shared<ErmLearner>(std::move(family), policy, std::move(loss), node_budget);
}

LearnerPtr min_rectangle_learner(std::size_t dimension) {
  return std::make_shared<MinRectangleLearner>(dimension);
}

Rational transductive_error(const TransductiveLearner& learner, std::span<const Point> points,
                            const Labeling& truth, const LossFunction& loss) {
  if (points.size() != truth.size()) {
    throw std::invalid_argument("datapoints and labeling differ in length");
  }
  if (truth.empty()) throw std::invalid_argument("transductive error on an empty dataset");
  Rational total(0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const PartialLabeling observed = mask(truth, i);
    const Label prediction = learner.predict(Scenario{points, observed, truth[i]});
    total += loss(prediction, truth[i]);
  }
  return total / static_cast<std::int64_t>(truth.size());
}

std::vector<Labeling> all_labelings(std::span<const Label> label_space, std::size_t n,
                                    std::size_t budget) {
  std::vector<Label> space(label_space.begin(), label_space.end());
  std::sort(space.begin(), space.end());
  space.erase(std::unique(space.begin(), space.end()), space.end());
  if (space.empty()) throw std::invalid_argument("label space is empty");
  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) {
    count *= space.size();
    if (count > budget) throw BudgetExceeded("agnostic-nodes", budget, count);
  }
  std::vector<Labeling> out;
  out.reserve(count);
  std::vector<std::size_t> digits(n, 0);
  for (std::size_t k = 0; k < count; ++k) {
    Labeling y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = space[digits[i]];
    out.push_back(std::move(y));
    for (std::size_t i = n; i-- > 0;) {
      if (++digits[i] < space.size()) break;
      digits[i] = 0;
    }
  }
  return out;
}

WorstCase worst_case_error(const TransductiveLearner& learner, const LabelingFamily& family,
                           std::span<const Point> points, Setting setting,
                           const LossFunction& loss, const Budgets& budgets) {
  const auto h = family.restrict_to(points, budgets.nodes);
  std::optional<WorstCase> worst;
  const auto consider = [&](const Labeling& y, const Rational& value) {
    if (!worst || value > worst->error) worst = WorstCase{value, y};
  };
  if (setting == Setting::realizable) {
    for (const auto& y : h) consider(y, transductive_error(learner, points, y, loss));
  } else {
    for (const auto& y : all_labelings(family.label_space(), points.size(), budgets.agnostic_nodes)) {
      consider(y, transductive_error(learner, points, y, loss) - best_in_class_loss(h, y, loss));
    }
  }
  return *worst;
}

}  // namespace oiglab
