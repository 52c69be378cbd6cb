#pragma once

#include "oiglab/core.hpp"
#include "oiglab/fds.hpp"
#include "oiglab/problem.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oiglab {

/// Task tags: build-oig, orient, hall, mad, evaluate, pac-eval, reduce,
/// fds-solve, fds-minmax, compactness.
const std::vector<std::string>& task_names();

/// String-valued task parameters with typed accessors. Missing keys fall
/// back to the given default; required keys throw ParseError naming them.
class Params {
 public:
  Params() = default;
  explicit Params(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  const std::map<std::string, std::string>& values() const noexcept { return values_; }

  std::string text(const std::string& key, const std::string& fallback) const;
  std::string text(const std::string& key) const;
  Rational rational(const std::string& key, const Rational& fallback) const;
  Rational rational(const std::string& key) const;
  std::uint64_t integer(const std::string& key, std::uint64_t fallback) const;
  std::uint64_t integer(const std::string& key) const;

 private:
  std::map<std::string, std::string> values_;
};

/// One experiment:
///
///   {"task": "orient", "instance": "path",
///    "problem": {...} | "problem_file": "path.json",
///    "fds": {...} | "fds_file": "fds.json",
///    "params": {"setting": "realizable", "eps": "1/3", "seed": 1},
///    "grid": {"n": [3, 4, 5]},
///    "output": "out.csv"}
///
/// Relative file names resolve against the experiment file's directory.
/// "grid" is read by sweeps only; key "n" keeps a prefix of the points,
/// every other key overrides the parameter of that name.
struct ExperimentSpec {
  std::string task;
  std::string instance;
  std::optional<ProblemSpec> problem;
  std::optional<Fds> fds;
  Params params;
  std::map<std::string, std::vector<std::string>> grid;
  std::string output;
};

ExperimentSpec parse_experiment(std::string_view json_text, const std::string& base_dir = ".");

/// Canonical JSON with the problem and FDS documents inlined.
std::string serialize_experiment(const ExperimentSpec& spec);

/// Rows of one task run. Rationals take three columns: _num, _den, _dec.
struct TaskResult {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string summary;  // human-readable, never part of the CSV
  int exit_code = 0;    // 0 ok, 2 infeasible with certificate
};

/// Column names a task emits, before any grid columns.
std::vector<std::string> task_header(const std::string& task);

/// Runs one task. Throws on invalid input or exhausted budgets.
TaskResult run_task(const ExperimentSpec& spec, const Budgets& budgets);

/// One row per grid point and task row, prefixed by the grid values and
/// suffixed by status ("ok", "infeasible" or "error") and message. A
/// failing point is recorded and the sweep continues. Points run
/// concurrently; rows come out in grid order (last key varies fastest).
TaskResult sweep(const ExperimentSpec& spec, const Budgets& budgets);

/// RFC 4180 CSV with LF line endings.
std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows);

/// Exactly rounded decimal with six fractional digits.
std::string decimal_string(const Rational& q);

/// Runs the task (or the sweep when `as_sweep`), writes the CSV to
/// spec.output or `csv`, the summary and any diagnostics to `log`, and
/// returns the process exit status: 0 ok, 1 error, 2 infeasible.
int run(const ExperimentSpec& spec, const Budgets& budgets, std::ostream& csv, std::ostream& log,
        bool as_sweep = false);

}  // namespace oiglab
