#pragma once

#include "oiglab/core.hpp"
#include "oiglab/fds.hpp"
#include "oiglab/pac.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oiglab {

/// A learning problem as read from a JSON document. An explicit table:
///
///   {
///     "name": "path",
///     "domain_points": [[1], [2], [3]],
///     "label_space": [0, 1],
///     "hypotheses": [[0, 0, 0], [0, 0, 1], [0, 1, 1], [1, 1, 1]],
///     "points": [[1], [2], [3]],
///     "loss": {"kind": "zero_one"},
///     "labels": [0, 0, 1],
///     "distribution": [{"x": [1], "y": 0, "weight": "1/3"}, ...]
///   }
///
/// or an intensional family in place of the first three fields:
/// "family": {"kind": "rectangles", "d": 2} or {"kind": "thresholds"}.
/// Loss kinds are "zero_one" (default), "absolute", "squared" and "table"
/// (with "table": [{"predicted": p, "true": t, "value": v}, ...]).
/// Rationals are JSON integers, decimals, or strings such as "3/4" or
/// "0.1"; labels may also be "+" or "-". Only "points" and the family are
/// required.
struct ProblemSpec {
  enum class FamilyKind { table, rectangles, thresholds };

  std::string name;
  FamilyKind family_kind = FamilyKind::table;
  std::size_t dimension = 0;          // rectangles
  std::vector<Point> domain;          // table
  std::vector<Label> table_labels;    // table
  std::vector<Labeling> hypotheses;   // table
  std::vector<Point> points;
  LossFunction loss = LossFunction::zero_one();
  std::optional<Labeling> labels;
  std::optional<std::vector<std::pair<Example, Rational>>> distribution;

  FamilyPtr family() const;

  /// The given distribution, or uniform over (points, labels) when only
  /// labels are present.
  FiniteDistribution finite_distribution() const;

  /// Copy keeping the first n points (and labels).
  ProblemSpec prefix(std::size_t n) const;
};

/// Throws ParseError: with line and column for malformed JSON, with 0/0
/// and the field path for schema violations.
ProblemSpec parse_problem(std::string_view json_text);

/// Canonical JSON: fixed key order, two-space indent, integers as numbers,
/// other rationals as "p/q" strings, trailing newline. Parsing the output
/// and serializing again is byte-identical.
std::string serialize_problem(const ProblemSpec& spec);

/// FDS document:
///
///   {
///     "inputs": [{"name": "a", "domain": [0, 1]}],
///     "outputs": ["b"],
///     "edges": [{"input": "a", "output": "b", "costs": [1, 0]}]
///   }
///
/// Edge endpoints are names or zero-based indices.
Fds parse_fds(std::string_view json_text);
std::string serialize_fds(const Fds& fds);

/// Reads a whole file; throws Error when it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace oiglab
