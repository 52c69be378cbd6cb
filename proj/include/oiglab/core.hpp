#pragma once

#include "oiglab/rational.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace oiglab {

/// A label is a rational scalar. Classification uses it as an opaque token
/// (only equality and order matter); regression losses use its value.
/// The symbols "+" and "-" parse to 1 and 0.
class Label {
 public:
  Label() = default;
  explicit Label(Rational value) : value_(value) {}
  explicit Label(std::int64_t value) : value_(value) {}

  const Rational& value() const noexcept { return value_; }

  static Label parse(std::string_view text);
  std::string str() const { return to_string(value_); }

  friend bool operator==(const Label& a, const Label& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Label& a, const Label& b) {
    if (a.value_ == b.value_) return std::strong_ordering::equal;
    return a.value_ < b.value_ ? std::strong_ordering::less : std::strong_ordering::greater;
  }

 private:
  Rational value_{0};
};

/// A datapoint is a tuple of rational coordinates. Explicit tables treat
/// it as an identifier; geometric families read the coordinates.
using Point = std::vector<Rational>;

/// Label vector over a fixed datapoint tuple S.
using Labeling = std::vector<Label>;

std::string to_string(const Labeling& y);
std::string to_string(const Point& x);

/// A labeling with exactly one blank entry.
class PartialLabeling {
 public:
  /// The entry at `hole` is discarded.
  PartialLabeling(Labeling entries, std::size_t hole);

  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t hole() const noexcept { return hole_; }

  /// Entry at i; throws std::out_of_range for the hole.
  const Label& at(std::size_t i) const;

  /// Entries with a canonical placeholder at the hole.
  const Labeling& entries() const noexcept { return entries_; }

  Labeling complete(const Label& fill) const;
  bool consistent_with(const Labeling& y) const;

  std::string str() const;

  friend auto operator<=>(const PartialLabeling&, const PartialLabeling&) = default;
  friend bool operator==(const PartialLabeling&, const PartialLabeling&) = default;

 private:
  // Declaration order fixes the sort order: by hole, then by entries.
  std::size_t hole_;
  Labeling entries_;
};

PartialLabeling mask(const Labeling& y, std::size_t i);

struct Dataset {
  std::vector<Point> points;
  Labeling labels;

  Dataset(std::vector<Point> points, Labeling labels);
  std::size_t size() const noexcept { return points.size(); }
};

class LossFunction {
 public:
  enum class Kind { zero_one, absolute, squared, table };
  using Table = std::map<std::pair<Label, Label>, Rational>;

  static LossFunction zero_one();
  static LossFunction absolute();
  static LossFunction squared();
  /// Keys are (predicted, true). Entries must be nonnegative; evaluating a
  /// pair missing from the table throws std::invalid_argument.
  static LossFunction table(Table entries);

  Kind kind() const noexcept { return kind_; }
  const Table& entries() const noexcept { return table_; }

  Rational operator()(const Label& predicted, const Label& truth) const;

  std::string name() const;

 private:
  explicit LossFunction(Kind kind) : kind_(kind) {}

  Kind kind_;
  Table table_;
};

/// Enumeration limits. Every exhaustive routine checks one of these and
/// throws BudgetExceeded instead of running away.
struct Budgets {
  std::size_t nodes = 4096;             // labelings in a restriction / OIG nodes
  std::size_t agnostic_nodes = 20000;   // |Y|^n right nodes of an agnostic OIG
  std::size_t subset_nodes = 18;        // ground set for 2^k subset enumeration
  std::size_t search_nodes = 20'000'000;  // FDS backtracking nodes

  /// Defaults, with `nodes` overridden by OIGLAB_BUDGET_NODES when set.
  static Budgets from_environment();
};

/// A hypothesis class seen only through its finite restrictions.
class LabelingFamily {
 public:
  virtual ~LabelingFamily() = default;

  /// H|_S: deduplicated, sorted lexicographically. Throws BudgetExceeded
  /// once more than `node_budget` distinct labelings are produced.
  virtual std::vector<Labeling> restrict_to(std::span<const Point> points,
                                            std::size_t node_budget) const = 0;

  /// Sorted label set Y.
  virtual std::vector<Label> label_space() const = 0;

  virtual std::string describe() const = 0;
};

using FamilyPtr = std::shared_ptr<const LabelingFamily>;

/// Finite list of label vectors over a fixed domain.
class ExplicitTable final : public LabelingFamily {
 public:
  ExplicitTable(std::vector<Point> domain, std::vector<Label> label_space,
                std::vector<Labeling> rows);

  std::vector<Labeling> restrict_to(std::span<const Point> points,
                                    std::size_t node_budget) const override;
  std::vector<Label> label_space() const override { return labels_; }
  std::string describe() const override;

  const std::vector<Point>& domain() const noexcept { return domain_; }
  const std::vector<Labeling>& rows() const noexcept { return rows_; }

 private:
  std::vector<Point> domain_;
  std::vector<Label> labels_;
  std::vector<Labeling> rows_;
};

/// Closed axis-aligned boxes in dimension d, labels {0 = -, 1 = +}.
/// A point on the boundary is inside.
class AxisAlignedRectangles final : public LabelingFamily {
 public:
  explicit AxisAlignedRectangles(std::size_t dimension);

  std::vector<Labeling> restrict_to(std::span<const Point> points,
                                    std::size_t node_budget) const override;
  std::vector<Label> label_space() const override;
  std::string describe() const override;

  std::size_t dimension() const noexcept { return dimension_; }

 private:
  std::size_t dimension_;
};

/// h_t(x) = [x >= t] over one-dimensional points, t ranging over the
/// extended reals.
class Thresholds final : public LabelingFamily {
 public:
  std::vector<Labeling> restrict_to(std::span<const Point> points,
                                    std::size_t node_budget) const override;
  std::vector<Label> label_space() const override;
  std::string describe() const override;
};

std::vector<Labeling> restriction(const LabelingFamily& family, std::span<const Point> points,
                                  std::size_t node_budget = Budgets{}.nodes);

/// min over f in F of the number of coordinates where y and f differ.
std::size_t hamming_distance(const Labeling& y, std::span<const Labeling> family);

Rational empirical_loss(const Labeling& predicted, const Labeling& truth,
                        const LossFunction& loss);

Rational best_in_class_loss(std::span<const Labeling> family, const Labeling& truth,
                            const LossFunction& loss);

/// Largest subset of `pool` shattered by a binary family. The pool is capped
/// at 20 points.
std::size_t vc_dimension(const LabelingFamily& family, std::span<const Point> pool);

/// Sum_{i <= d} C(n, i).
std::uint64_t growth_function(std::size_t d, std::size_t n);

struct FiniteProjection {
  std::vector<Point> points;
  std::vector<Labeling> hypotheses;  // labelings over `points`
  std::vector<Label> labels;
};

/// Explicit table over proj.points holding exactly the retained
/// restrictions. Throws std::invalid_argument when a retained labeling is
/// not a restriction of the family or uses a dropped label.
std::shared_ptr<const ExplicitTable> project(const LabelingFamily& family,
                                             const FiniteProjection& proj,
                                             std::size_t node_budget = Budgets{}.nodes);

}  // namespace oiglab
