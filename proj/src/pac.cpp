#include "oiglab/pac.hpp"

#include "oiglab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace oiglab {

FiniteDistribution::FiniteDistribution(std::vector<Example> support, std::vector<Rational> weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
  if (support_.empty()) throw std::invalid_argument("distribution has empty support");
  if (support_.size() != weights_.size()) {
    throw std::invalid_argument("distribution needs one weight per support example");
  }
  Rational total(0);
  for (const auto& w : weights_) {
    if (w < 0) throw std::invalid_argument("negative weight " + to_string(w));
    total += w;
    denominator_ = std::lcm(denominator_, w.denominator());
  }
  if (total != 1) throw std::invalid_argument("weights sum to " + to_string(total) + ", not 1");
  std::int64_t running = 0;
  for (const auto& w : weights_) {
    running += w.numerator() * (denominator_ / w.denominator());
    cumulative_.push_back(running);
  }
}

FiniteDistribution FiniteDistribution::uniform(std::vector<Example> support) {
  const auto n = static_cast<std::int64_t>(support.size());
  if (n == 0) throw std::invalid_argument("distribution has empty support");
  std::vector<Rational> weights(support.size(), Rational(1, n));
  return FiniteDistribution(std::move(support), std::move(weights));
}

std::vector<Point> FiniteDistribution::support_points() const {
  std::vector<Point> out;
  for (const auto& e : support_) {
    if (std::find(out.begin(), out.end(), e.x) == out.end()) out.push_back(e.x);
  }
  return out;
}

const Example& FiniteDistribution::sample(Rng& rng) const {
  const auto u = static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(denominator_)));
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return support_[static_cast<std::size_t>(it - cumulative_.begin())];
}

std::vector<Example> FiniteDistribution::sample(Rng& rng, std::size_t count) const {
  std::vector<Example> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample(rng));
  return out;
}

Rational true_loss(const Predictor& f, const FiniteDistribution& dist, const LossFunction& loss) {
  Rational total(0);
  for (std::size_t i = 0; i < dist.support().size(); ++i) {
    const auto& e = dist.support()[i];
    total += dist.weights()[i] * loss(f(e.x), e.y);
  }
  return total;
}

Rational best_in_class_true_loss(const LabelingFamily& family, const FiniteDistribution& dist,
                                 const LossFunction& loss, std::size_t node_budget) {
  const auto points = dist.support_points();
  std::vector<std::size_t> index;
  for (const auto& e : dist.support()) {
    index.push_back(static_cast<std::size_t>(std::find(points.begin(), points.end(), e.x) -
                                             points.begin()));
  }
  std::optional<Rational> best;
  for (const auto& h : family.restrict_to(points, node_budget)) {
    Rational total(0);
    for (std::size_t i = 0; i < dist.support().size(); ++i) {
      total += dist.weights()[i] * loss(h[index[i]], dist.support()[i].y);
    }
    if (!best || total < *best) best = total;
  }
  if (!best) throw std::invalid_argument("family has no restriction to the support");
  return *best;
}

namespace {

class ConstantLearner final : public PacLearner {
 public:
  explicit ConstantLearner(Label value) : value_(value) {}
  Predictor train(std::span<const Example>) const override {
    return [value = value_](const Point&) { return value; };
  }
  std::string name() const override { return "constant(" + value_.str() + ")"; }

 private:
  Label value_;
};

class NearestNeighborLearner final : public PacLearner {
 public:
  explicit NearestNeighborLearner(std::vector<Label> label_space) {
    if (label_space.empty()) throw std::invalid_argument("label space is empty");
    fallback_ = *std::min_element(label_space.begin(), label_space.end());
  }

  Predictor train(std::span<const Example> samples) const override {
    return [memory = std::vector<Example>(samples.begin(), samples.end()),
            fallback = fallback_](const Point& x) {
      std::optional<Rational> best;
      Label prediction = fallback;
      for (const auto& e : memory) {
        if (e.x.size() != x.size()) throw std::invalid_argument("dimension mismatch");
        Rational d(0);
        for (std::size_t k = 0; k < x.size(); ++k) d += (e.x[k] - x[k]) * (e.x[k] - x[k]);
        if (!best || d < *best) {
          best = d;
          prediction = e.y;
        }
      }
      return prediction;
    };
  }
  std::string name() const override { return "nn"; }

 private:
  Label fallback_;
};

class MinRectanglePacLearner final : public PacLearner {
 public:
  explicit MinRectanglePacLearner(std::size_t dimension) : dimension_(dimension) {
    if (dimension_ == 0) throw std::invalid_argument("rectangle dimension must be positive");
  }

  Predictor train(std::span<const Example> samples) const override {
    std::vector<Rational> lo, hi;
    for (const auto& e : samples) {
      if (e.x.size() != dimension_) throw std::invalid_argument("dimension mismatch");
      if (e.y != Label(1)) continue;
      if (lo.empty()) {
        lo = hi = e.x;
        continue;
      }
      for (std::size_t k = 0; k < dimension_; ++k) {
        lo[k] = std::min(lo[k], e.x[k]);
        hi[k] = std::max(hi[k], e.x[k]);
      }
    }
    return [lo, hi](const Point& x) {
      if (lo.empty()) return Label(0);
      for (std::size_t k = 0; k < lo.size(); ++k) {
        if (x[k] < lo[k] || hi[k] < x[k]) return Label(0);
      }
      return Label(1);
    };
  }
  std::string name() const override { return "minrect"; }

 private:
  std::size_t dimension_;
};

class PacToTransductive final : public TransductiveLearner {
 public:
  PacToTransductive(PacLearnerPtr pac, std::uint64_t seed) : pac_(std::move(pac)), seed_(seed) {}

  Label predict(const Scenario& scenario) const override {
    const auto& observed = scenario.observed;
    if (scenario.points.size() != observed.size()) {
      throw std::invalid_argument("scenario points and labels differ in length");
    }
    std::vector<Example> pool;
    for (std::size_t j = 0; j < observed.size(); ++j) {
      if (j != observed.hole()) pool.push_back({scenario.points[j], observed.at(j)});
    }
    std::vector<Example> draws;
    if (!pool.empty()) {
      auto rng = stream_generator(seed_, scenario_key(scenario));
      for (std::size_t k = 0; k < observed.size(); ++k) {
        draws.push_back(pool[uniform_below(rng, pool.size())]);
      }
    }
    return pac_->train(draws)(scenario.points[observed.hole()]);
  }

  std::string name() const override { return "p2t(" + pac_->name() + ")"; }

 private:
  PacLearnerPtr pac_;
  std::uint64_t seed_;
};

class TransductiveToPac final : public PacLearner {
 public:
  TransductiveToPac(LearnerPtr t, ReductionConfig config)
      : t_(std::move(t)), config_(std::move(config)) {
    if (config_.block_size == 0) throw std::invalid_argument("block size must be positive");
  }

  Predictor train(std::span<const Example> samples) const override {
    const std::size_t r = config_.repetitions();
    const std::size_t m = config_.holdout_size();
    const std::size_t b = config_.block_size;
    if (samples.size() < r * b + m) {
      throw std::invalid_argument("insufficient samples: " + std::to_string(samples.size()) +
                                  " given, " + std::to_string(r * b + m) + " required (r=" +
                                  std::to_string(r) + ", block=" + std::to_string(b) +
                                  ", m=" + std::to_string(m) + ")");
    }
    const auto holdout = samples.subspan(r * b, m);
    std::optional<Predictor> chosen;
    std::optional<Rational> chosen_loss;
    for (std::size_t j = 0; j < r; ++j) {
      Predictor f = curry(samples.subspan(j * b, b));
      Rational total(0);
      for (const auto& e : holdout) total += config_.loss(f(e.x), e.y);
      if (!chosen_loss || total < *chosen_loss) {
        chosen_loss = total;
        chosen = std::move(f);
      }
    }
    return *chosen;
  }

  std::string name() const override { return "t2p(" + t_->name() + ")"; }

 private:
  /// f(x) = t.predict(block + x, hole at x), memoized per point. The
  /// returned predictor is not safe for concurrent calls.
  Predictor curry(std::span<const Example> block) const {
    auto points = std::make_shared<std::vector<Point>>();
    Labeling labels;
    for (const auto& e : block) {
      points->push_back(e.x);
      labels.push_back(e.y);
    }
    labels.emplace_back();
    auto observed = std::make_shared<const PartialLabeling>(std::move(labels), block.size());
    auto memo = std::make_shared<std::map<Point, Label>>();
    return [t = t_, points, observed, memo](const Point& x) {
      if (const auto it = memo->find(x); it != memo->end()) return it->second;
      points->push_back(x);
      Label y;
      try {
        y = t->predict(Scenario{*points, *observed, std::nullopt});
      } catch (...) {
        points->pop_back();
        throw;
      }
      points->pop_back();
      memo->emplace(x, y);
      return y;
    };
  }

  LearnerPtr t_;
  ReductionConfig config_;
};

}  // namespace

PacLearnerPtr constant_pac_learner(Label value) { return std::make_shared<ConstantLearner>(value); }

PacLearnerPtr nearest_neighbor_pac_learner(std::vector<Label> label_space) {
  return std::make_shared<NearestNeighborLearner>(std::move(label_space));
}

PacLearnerPtr min_rectangle_pac_learner(std::size_t dimension) {
  return std::make_shared<MinRectanglePacLearner>(dimension);
}

LearnerPtr pac_to_transductive(PacLearnerPtr pac, std::uint64_t seed) {
  return std::make_shared<PacToTransductive>(std::move(pac), seed);
}

std::size_t ReductionConfig::repetitions() const {
  if (repetitions_override) return *repetitions_override;
  if (delta <= 0 || delta >= 1) throw std::invalid_argument("delta must lie in (0, 1)");
  const double r = std::ceil(c1 * std::log(1.0 / to_double(delta)));
  return std::max<std::size_t>(1, static_cast<std::size_t>(r));
}

std::size_t ReductionConfig::holdout_size() const {
  if (holdout_override) return *holdout_override;
  if (delta <= 0 || delta >= 1) throw std::invalid_argument("delta must lie in (0, 1)");
  if (holdout_eps <= 0) throw std::invalid_argument("holdout eps must be positive");
  const double r = static_cast<double>(repetitions());
  const double m = std::ceil(c2 * std::log(r / to_double(delta)) / to_double(holdout_eps));
  return static_cast<std::size_t>(std::max(0.0, m));
}

PacLearnerPtr transductive_to_pac(LearnerPtr transductive, ReductionConfig config) {
  return std::make_shared<TransductiveToPac>(std::move(transductive), std::move(config));
}

Rational PacEstimate::quantile(const Rational& p) const {
  if (sorted.empty()) throw std::invalid_argument("quantile of an empty estimate");
  if (p <= 0 || p > 1) throw std::invalid_argument("quantile level must lie in (0, 1]");
  const auto rank = ceil_of(p * static_cast<std::int64_t>(sorted.size()));
  return sorted[static_cast<std::size_t>(std::max<std::int64_t>(rank, 1) - 1)];
}

Rational PacEstimate::exceedance(const Rational& threshold) const {
  if (sorted.empty()) return Rational(0);
  const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), threshold);
  return Rational(above, static_cast<std::int64_t>(sorted.size()));
}

PacEstimate pac_error_estimate(const PacLearner& pac, const FiniteDistribution& dist,
                               std::size_t n, std::size_t trials, std::uint64_t seed,
                               Setting setting, const LossFunction& loss,
                               const LabelingFamily* family, const Budgets& budgets) {
  if (trials == 0) throw std::invalid_argument("trials must be at least 1");
  Rational offset(0);
  if (setting == Setting::agnostic) {
    if (family == nullptr) throw std::invalid_argument("agnostic estimate needs a family");
    offset = best_in_class_true_loss(*family, dist, loss, budgets.nodes);
  }

  PacEstimate out;
  out.per_trial.resize(trials);
  const auto run = [&](std::size_t worker, std::size_t workers) {
    for (std::size_t t = worker; t < trials; t += workers) {
      auto rng = stream_generator(seed, t);
      const auto samples = dist.sample(rng, n);
      out.per_trial[t] = true_loss(pac.train(samples), dist, loss) - offset;
    }
  };
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(trials, 1));
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 1; w < workers; ++w) jobs.push_back(std::async(std::launch::async, run, w, workers));
  run(0, workers);
  for (auto& j : jobs) j.get();

  out.sorted = out.per_trial;
  std::sort(out.sorted.begin(), out.sorted.end());
  Rational total(0);
  for (const auto& l : out.sorted) total += l;
  out.mean = total / static_cast<std::int64_t>(trials);
  return out;
}

Rational leave_one_out_error(const TransductiveLearner& learner, const Dataset& data,
                             const LossFunction& loss) {
  const std::size_t n = data.size();
  if (n == 0) throw std::invalid_argument("leave-one-out on an empty dataset");
  if (n > 8) throw BudgetExceeded("leave-one-out-points", 8, n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rational total(0);
  std::int64_t count = 0;
  std::vector<Point> points(n);
  Labeling labels(n);
  do {
    for (std::size_t k = 0; k < n; ++k) {
      points[k] = data.points[order[k]];
      labels[k] = data.labels[order[k]];
    }
    const auto observed = mask(labels, n - 1);
    total += loss(learner.predict(Scenario{points, observed, labels[n - 1]}), labels[n - 1]);
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  return total / count;
}

}  // namespace oiglab
