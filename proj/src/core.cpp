#include "oiglab/core.hpp"

#include "oiglab/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace oiglab {

Label Label::parse(std::string_view text) {
  if (text == "+") return Label(1);
  if (text == "-") return Label(0);
  return Label(parse_rational(text));
}

namespace {

template <typename Seq, typename F>
std::string join(const Seq& items, F&& fmt) {
  std::string out;
  bool first = true;
  for (const auto& item : items) {
    if (!first) out += ',';
    out += fmt(item);
    first = false;
  }
  return out;
}

void sort_unique(std::vector<Labeling>& labelings) {
  std::sort(labelings.begin(), labelings.end());
  labelings.erase(std::unique(labelings.begin(), labelings.end()), labelings.end());
}

void check_budget(std::size_t size, std::size_t budget) {
  if (size > budget) throw BudgetExceeded("nodes", budget, size);
}

}  // namespace

std::string to_string(const Labeling& y) {
  return join(y, [](const Label& l) { return l.str(); });
}

std::string to_string(const Point& x) {
  return "(" + join(x, [](const Rational& q) { return to_string(q); }) + ")";
}

PartialLabeling::PartialLabeling(Labeling entries, std::size_t hole)
    : hole_(hole), entries_(std::move(entries)) {
  if (hole_ >= entries_.size()) {
    throw std::out_of_range("partial labeling hole index out of range");
  }
  entries_[hole_] = Label{};
}

const Label& PartialLabeling::at(std::size_t i) const {
  if (i == hole_) throw std::out_of_range("entry is the blank");
  return entries_.at(i);
}

Labeling PartialLabeling::complete(const Label& fill) const {
  Labeling y = entries_;
  y[hole_] = fill;
  return y;
}

bool PartialLabeling::consistent_with(const Labeling& y) const {
  if (y.size() != entries_.size()) return false;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (i != hole_ && y[i] != entries_[i]) return false;
  }
  return true;
}

std::string PartialLabeling::str() const {
  std::string out;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) out += ',';
    out += i == hole_ ? std::string("?") : entries_[i].str();
  }
  return out;
}

PartialLabeling mask(const Labeling& y, std::size_t i) { return PartialLabeling(y, i); }

Dataset::Dataset(std::vector<Point> pts, Labeling lbls)
    : points(std::move(pts)), labels(std::move(lbls)) {
  if (points.empty()) throw std::invalid_argument("dataset must be nonempty");
  if (points.size() != labels.size()) {
    throw std::invalid_argument("dataset points and labels differ in length");
  }
}

LossFunction LossFunction::zero_one() { return LossFunction(Kind::zero_one); }
LossFunction LossFunction::absolute() { return LossFunction(Kind::absolute); }
LossFunction LossFunction::squared() { return LossFunction(Kind::squared); }

LossFunction LossFunction::table(Table entries) {
  for (const auto& [key, value] : entries) {
    if (value < 0) throw std::invalid_argument("loss table entries must be nonnegative");
  }
  LossFunction loss(Kind::table);
  loss.table_ = std::move(entries);
  return loss;
}

Rational LossFunction::operator()(const Label& predicted, const Label& truth) const {
  switch (kind_) {
    case Kind::zero_one:
      return predicted == truth ? Rational(0) : Rational(1);
    case Kind::absolute: {
      const Rational d = predicted.value() - truth.value();
      return d < 0 ? -d : d;
    }
    case Kind::squared: {
      const Rational d = predicted.value() - truth.value();
      return d * d;
    }
    case Kind::table: {
      const auto it = table_.find({predicted, truth});
      if (it == table_.end()) {
        throw std::invalid_argument("loss table has no entry for (" + predicted.str() + ", " +
                                    truth.str() + ")");
      }
      return it->second;
    }
  }
  return Rational(0);
}

std::string LossFunction::name() const {
  switch (kind_) {
    case Kind::zero_one: return "zero_one";
    case Kind::absolute: return "absolute";
    case Kind::squared: return "squared";
    case Kind::table: return "table";
  }
  return "unknown";
}

Budgets Budgets::from_environment() {
  Budgets budgets;
  if (const char* env = std::getenv("OIGLAB_BUDGET_NODES"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || value == 0) {
      throw std::invalid_argument(std::string("OIGLAB_BUDGET_NODES is not a positive integer: ") +
                                  env);
    }
    budgets.nodes = static_cast<std::size_t>(value);
  }
  return budgets;
}

// ---------------------------------------------------------------------------
// ExplicitTable

ExplicitTable::ExplicitTable(std::vector<Point> domain, std::vector<Label> label_space,
                             std::vector<Labeling> rows)
    : domain_(std::move(domain)), labels_(std::move(label_space)), rows_(std::move(rows)) {
  if (domain_.empty()) throw std::invalid_argument("explicit table needs a nonempty domain");
  if (rows_.empty()) throw std::invalid_argument("explicit table needs at least one hypothesis");
  std::sort(labels_.begin(), labels_.end());
  labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
  for (const auto& row : rows_) {
    if (row.size() != domain_.size()) {
      throw std::invalid_argument("hypothesis row length " + std::to_string(row.size()) +
                                  " does not match domain size " +
                                  std::to_string(domain_.size()));
    }
    for (const auto& l : row) {
      if (!std::binary_search(labels_.begin(), labels_.end(), l)) {
        throw std::invalid_argument("hypothesis uses label " + l.str() +
                                    " outside the label space");
      }
    }
  }
  sort_unique(rows_);
}

std::vector<Labeling> ExplicitTable::restrict_to(std::span<const Point> points,
                                                 std::size_t node_budget) const {
  if (points.empty()) throw std::invalid_argument("restriction to an empty datapoint tuple");
  std::vector<std::size_t> columns;
  columns.reserve(points.size());
  for (const auto& x : points) {
    const auto it = std::find(domain_.begin(), domain_.end(), x);
    if (it == domain_.end()) {
      throw std::invalid_argument("datapoint " + to_string(x) + " is not in the table's domain");
    }
    columns.push_back(static_cast<std::size_t>(it - domain_.begin()));
  }
  std::vector<Labeling> out;
  out.reserve(rows_.size());
  for (const auto& row : rows_) {
    Labeling y;
    y.reserve(columns.size());
    for (auto c : columns) y.push_back(row[c]);
    out.push_back(std::move(y));
  }
  sort_unique(out);
  check_budget(out.size(), node_budget);
  return out;
}

std::string ExplicitTable::describe() const {
  return "explicit table (" + std::to_string(rows_.size()) + " hypotheses over " +
         std::to_string(domain_.size()) + " points)";
}

// ---------------------------------------------------------------------------
// AxisAlignedRectangles

AxisAlignedRectangles::AxisAlignedRectangles(std::size_t dimension) : dimension_(dimension) {
  if (dimension_ == 0) throw std::invalid_argument("rectangle dimension must be positive");
}

std::vector<Label> AxisAlignedRectangles::label_space() const { return {Label(0), Label(1)}; }

std::string AxisAlignedRectangles::describe() const {
  return "axis-aligned rectangles, d=" + std::to_string(dimension_);
}

std::vector<Labeling> AxisAlignedRectangles::restrict_to(std::span<const Point> points,
                                                         std::size_t node_budget) const {
  if (points.empty()) throw std::invalid_argument("restriction to an empty datapoint tuple");
  for (const auto& x : points) {
    if (x.size() != dimension_) {
      throw std::invalid_argument("point " + to_string(x) + " is not " +
                                  std::to_string(dimension_) + "-dimensional");
    }
  }
  // Every realizable positive set is S intersected with a box whose faces
  // pass through point coordinates, so enumerating those boxes (plus the
  // empty box) yields H|_S exactly.
  std::vector<std::vector<Rational>> coords(dimension_);
  for (std::size_t k = 0; k < dimension_; ++k) {
    for (const auto& x : points) coords[k].push_back(x[k]);
    std::sort(coords[k].begin(), coords[k].end());
    coords[k].erase(std::unique(coords[k].begin(), coords[k].end()), coords[k].end());
  }

  // Per-axis rank of each point so the inner loop compares integers.
  const std::size_t n = points.size();
  std::vector<std::vector<std::size_t>> rank(dimension_, std::vector<std::size_t>(n));
  for (std::size_t k = 0; k < dimension_; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      rank[k][i] = static_cast<std::size_t>(
          std::lower_bound(coords[k].begin(), coords[k].end(), points[i][k]) - coords[k].begin());
    }
  }

  std::set<Labeling> found;
  found.insert(Labeling(n, Label(0)));

  std::vector<std::size_t> lo(dimension_, 0), hi(dimension_, 0);
  const Label plus(1);
  const Label minus(0);
  while (true) {
    Labeling y(n, minus);
    for (std::size_t i = 0; i < n; ++i) {
      bool inside = true;
      for (std::size_t k = 0; k < dimension_ && inside; ++k) {
        inside = lo[k] <= rank[k][i] && rank[k][i] <= hi[k];
      }
      if (inside) y[i] = plus;
    }
    found.insert(std::move(y));
    check_budget(found.size(), node_budget);

    // Odometer over (lo[k] <= hi[k]) pairs, last axis fastest.
    std::size_t k = dimension_;
    while (k > 0) {
      --k;
      if (hi[k] + 1 < coords[k].size()) {
        ++hi[k];
        break;
      }
      if (lo[k] + 1 < coords[k].size()) {
        ++lo[k];
        hi[k] = lo[k];
        break;
      }
      lo[k] = hi[k] = 0;
      if (k == 0) return {found.begin(), found.end()};
    }
  }
}

// ---------------------------------------------------------------------------
// Thresholds

std::vector<Label> Thresholds::label_space() const { return {Label(0), Label(1)}; }

std::string Thresholds::describe() const { return "thresholds [x >= t]"; }

std::vector<Labeling> Thresholds::restrict_to(std::span<const Point> points,
                                              std::size_t node_budget) const {
  if (points.empty()) throw std::invalid_argument("restriction to an empty datapoint tuple");
  std::vector<Rational> cuts;
  for (const auto& x : points) {
    if (x.size() != 1) {
      throw std::invalid_argument("threshold points must be one-dimensional, got " +
                                  to_string(x));
    }
    cuts.push_back(x[0]);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Labeling> out;
  out.emplace_back(points.size(), Label(0));  // t above every point
  for (const auto& t : cuts) {
    Labeling y;
    y.reserve(points.size());
    for (const auto& x : points) y.push_back(Label(x[0] >= t ? 1 : 0));
    out.push_back(std::move(y));
  }
  sort_unique(out);
  check_budget(out.size(), node_budget);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<Labeling> restriction(const LabelingFamily& family, std::span<const Point> points,
                                  std::size_t node_budget) {
  return family.restrict_to(points, node_budget);
}

std::size_t hamming_distance(const Labeling& y, std::span<const Labeling> family) {
  if (family.empty()) throw std::invalid_argument("hamming distance to an empty set");
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (const auto& f : family) {
    if (f.size() != y.size()) throw std::invalid_argument("labeling length mismatch");
    std::size_t d = 0;
    for (std::size_t i = 0; i < y.size() && d < best; ++i) d += y[i] != f[i];
    best = std::min(best, d);
  }
  return best;
}

Rational empirical_loss(const Labeling& predicted, const Labeling& truth,
                        const LossFunction& loss) {
  if (predicted.size() != truth.size()) throw std::invalid_argument("labeling length mismatch");
  if (truth.empty()) throw std::invalid_argument("empirical loss of an empty labeling");
  Rational total(0);
  for (std::size_t i = 0; i < truth.size(); ++i) total += loss(predicted[i], truth[i]);
  return total / static_cast<std::int64_t>(truth.size());
}

Rational best_in_class_loss(std::span<const Labeling> family, const Labeling& truth,
                            const LossFunction& loss) {
  if (family.empty()) throw std::invalid_argument("best-in-class loss over an empty set");
  Rational best = empirical_loss(family.front(), truth, loss);
  for (const auto& f : family.subspan(1)) best = std::min(best, empirical_loss(f, truth, loss));
  return best;
}

std::uint64_t growth_function(std::size_t d, std::size_t n) {
  std::uint64_t total = 0;
  std::uint64_t binom = 1;  // C(n, i)
  for (std::size_t i = 0; i <= std::min(d, n); ++i) {
    total += binom;
    binom = binom * (n - i) / (i + 1);
  }
  return total;
}

std::size_t vc_dimension(const LabelingFamily& family, std::span<const Point> pool) {
  const auto labels = family.label_space();
  if (labels.size() != 2) {
    throw std::invalid_argument("VC dimension needs a binary label space, got " +
                                std::to_string(labels.size()) + " labels");
  }
  constexpr std::size_t kPoolCap = 20;
  if (pool.size() > kPoolCap) throw BudgetExceeded("vc-pool", kPoolCap, pool.size());
  if (pool.empty()) return 0;

  const std::size_t m = pool.size();
  const auto full = family.restrict_to(pool, std::size_t{1} << m);
  std::vector<std::uint32_t> bits;
  bits.reserve(full.size());
  for (const auto& y : full) {
    std::uint32_t b = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (y[i] == labels[1]) b |= std::uint32_t{1} << i;
    }
    bits.push_back(b);
  }

  // Shattering is hereditary: stop at the first size with no shattered subset.
  std::size_t best = 0;
  for (std::size_t k = 1; k <= m; ++k) {
    if ((std::uint64_t{1} << k) > full.size()) break;
    bool any = false;
    for (std::uint32_t subset = 0; subset < (std::uint32_t{1} << m) && !any; ++subset) {
      if (static_cast<std::size_t>(__builtin_popcount(subset)) != k) continue;
      std::unordered_set<std::uint32_t> seen;
      for (auto b : bits) seen.insert(b & subset);
      any = seen.size() == (std::size_t{1} << k);
    }
    if (!any) break;
    best = k;
  }
  return best;
}

std::shared_ptr<const ExplicitTable> project(const LabelingFamily& family,
                                             const FiniteProjection& proj,
                                             std::size_t node_budget) {
  if (proj.points.empty()) throw std::invalid_argument("projection needs at least one point");
  if (proj.hypotheses.empty()) {
    throw std::invalid_argument("projection needs at least one hypothesis");
  }
  const auto available = family.restrict_to(proj.points, node_budget);
  std::vector<Label> labels = proj.labels;
  std::sort(labels.begin(), labels.end());
  for (const auto& h : proj.hypotheses) {
    if (!std::binary_search(available.begin(), available.end(), h)) {
      throw std::invalid_argument("retained labeling " + to_string(h) +
                                  " is not a restriction of the family");
    }
    for (const auto& l : h) {
      if (!std::binary_search(labels.begin(), labels.end(), l)) {
        throw std::invalid_argument("retained labeling " + to_string(h) +
                                    " uses dropped label " + l.str());
      }
    }
  }
  return std::make_shared<const ExplicitTable>(proj.points, proj.labels, proj.hypotheses);
}

}  // namespace oiglab
