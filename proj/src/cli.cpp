#include "oiglab/cli.hpp"

#include "json_util.hpp"
#include "oiglab/errors.hpp"
#include "oiglab/learners.hpp"
#include "oiglab/matching.hpp"
#include "oiglab/oig.hpp"
#include "oiglab/pac.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace oiglab {

using detail::Json;
using detail::OrderedJson;

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names{"build-oig", "orient",    "hall",      "mad",
                                              "evaluate",  "pac-eval",  "reduce",    "fds-solve",
                                              "fds-minmax", "compactness"};
  return names;
}

// ---- Params -----------------------------------------------------------------

std::string Params::text(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string Params::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ParseError("missing parameter \"" + key + "\"", 0, 0);
  return it->second;
}

Rational Params::rational(const std::string& key, const Rational& fallback) const {
  return has(key) ? rational(key) : fallback;
}

Rational Params::rational(const std::string& key) const {
  try {
    return parse_rational(text(key));
  } catch (const std::invalid_argument& e) {
    throw ParseError("parameter \"" + key + "\": " + e.what(), 0, 0);
  }
}

std::uint64_t Params::integer(const std::string& key, std::uint64_t fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::uint64_t Params::integer(const std::string& key) const {
  const auto value = text(key);
  std::size_t used = 0;
  std::uint64_t out = 0;
  try {
    if (value.empty() || value.front() == '-') throw std::invalid_argument(value);
    out = std::stoull(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) {
    throw ParseError("parameter \"" + key + "\": expected a nonnegative integer, got \"" + value + "\"",
                     0, 0);
  }
  return out;
}

// ---- Formatting -------------------------------------------------------------

std::string decimal_string(const Rational& q) {
  constexpr std::int64_t kScale = 1'000'000;
  const __int128 scaled = static_cast<__int128>(q.numerator()) * kScale;
  const __int128 den = q.denominator();
  __int128 whole = scaled / den;
  const __int128 rem = scaled % den;
  if (2 * (rem < 0 ? -rem : rem) >= den) whole += scaled < 0 ? -1 : 1;
  const bool negative = whole < 0;
  if (negative) whole = -whole;
  const auto int_part = static_cast<std::uint64_t>(whole / kScale);
  auto frac = std::to_string(static_cast<std::uint64_t>(whole % kScale));
  frac.insert(0, 6 - frac.size(), '0');
  return (negative ? "-" : "") + std::to_string(int_part) + "." + frac;
}

std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) {
  const auto cell = [](const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + "\"";
  };
  const auto line = [&](const std::vector<std::string>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i > 0) out += ',';
      out += cell(values[i]);
    }
    return out + "\n";
  };
  std::string out = line(header);
  for (const auto& r : rows) out += line(r);
  return out;
}

namespace {

std::vector<std::string> rational_columns(const std::string& prefix) {
  return {prefix + "_num", prefix + "_den", prefix + "_dec"};
}

void append_rational(std::vector<std::string>& row, const Rational& q) {
  row.push_back(std::to_string(q.numerator()));
  row.push_back(std::to_string(q.denominator()));
  row.push_back(decimal_string(q));
}

void append_blank(std::vector<std::string>& row, std::size_t count) {
  row.insert(row.end(), count, "");
}

std::string boolean(bool b) { return b ? "true" : "false"; }

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// ---- Task plumbing ----------------------------------------------------------

const ProblemSpec& need_problem(const ExperimentSpec& spec) {
  if (!spec.problem) throw ParseError("task " + spec.task + " needs a problem", 0, 0);
  return *spec.problem;
}

Setting setting_of(const Params& params) {
  const auto s = params.text("setting", "realizable");
  if (s == "realizable") return Setting::realizable;
  if (s == "agnostic") return Setting::agnostic;
  throw ParseError("parameter \"setting\": expected realizable or agnostic, got \"" + s + "\"", 0, 0);
}

std::string setting_name(Setting s) { return s == Setting::realizable ? "realizable" : "agnostic"; }

BipartiteOig bipartite_for(const ProblemSpec& p, Setting setting, const Budgets& budgets) {
  const auto family = p.family();
  const auto h = family->restrict_to(p.points, budgets.nodes);
  const auto labels = family->label_space();
  if (setting == Setting::realizable) return build_bipartite_oig(h, labels, budgets.nodes);
  return build_agnostic_oig(h, labels, p.points.size(), budgets.agnostic_nodes);
}

std::size_t dimension_of(const ProblemSpec& p) {
  if (p.family_kind == ProblemSpec::FamilyKind::rectangles) return p.dimension;
  if (p.points.empty()) throw ParseError("cannot infer a dimension without points", 0, 0);
  return p.points.front().size();
}

ReductionConfig reduction_config(const Params& params, std::size_t default_block,
                                 const Rational& default_holdout_eps, const LossFunction& loss) {
  ReductionConfig config;
  config.delta = params.rational("delta", Rational(1, 10));
  config.block_size = params.integer("block", default_block);
  config.holdout_eps = params.rational("holdout_eps", default_holdout_eps);
  config.c1 = to_double(params.rational("c1", Rational(8)));
  config.c2 = to_double(params.rational("c2", Rational(4)));
  if (params.has("repetitions")) config.repetitions_override = params.integer("repetitions");
  if (params.has("holdout")) config.holdout_override = params.integer("holdout");
  config.loss = loss;
  return config;
}

LearnerPtr make_transductive(const std::string& name, const ExperimentSpec& spec,
                             const Budgets& budgets);

PacLearnerPtr make_pac(const std::string& name, const ExperimentSpec& spec, const Budgets& budgets) {
  const auto& p = need_problem(spec);
  const auto family = p.family();
  if (name == "constant") {
    const auto labels = family->label_space();
    Label value = labels.front();
    if (spec.params.has("constant")) {
      try {
        value = Label::parse(spec.params.text("constant"));
      } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("parameter \"constant\": ") + e.what(), 0, 0);
      }
    }
    return constant_pac_learner(value);
  }
  if (name == "nn") return nearest_neighbor_pac_learner(family->label_space());
  if (name == "minrect") return min_rectangle_pac_learner(dimension_of(p));
  if (name == "t2p") {
    const auto support = p.finite_distribution().support_points();
    const auto config = reduction_config(spec.params, std::max<std::size_t>(support.size(), 2) - 1,
                                         Rational(1, 10), p.loss);
    return transductive_to_pac(make_transductive(spec.params.text("transductive", "oig"), spec, budgets),
                               config);
  }
  throw ParseError("unknown PAC learner \"" + name + "\" (constant, nn, minrect, t2p)", 0, 0);
}

LearnerPtr make_transductive(const std::string& name, const ExperimentSpec& spec,
                             const Budgets& budgets) {
  const auto& p = need_problem(spec);
  if (name == "oig") return optimal_oig_learner(p.family(), budgets.nodes);
  if (name == "erm") {
    TieBreakPolicy policy;
    const auto tie = spec.params.text("tiebreak", "first");
    if (tie == "first") {
      policy.kind = TieBreak::first_lexicographic;
    } else if (tie == "adversarial") {
      policy.kind = TieBreak::adversarial_oracle;
    } else if (tie == "seeded") {
      policy.kind = TieBreak::seeded_random;
      policy.seed = spec.params.integer("seed");
    } else {
      throw ParseError("parameter \"tiebreak\": expected first, adversarial or seeded", 0, 0);
    }
    return erm_learner(p.family(), policy, p.loss, budgets.nodes);
  }
  if (name == "minrect") return min_rectangle_learner(dimension_of(p));
  if (name == "p2t") {
    return pac_to_transductive(make_pac(spec.params.text("pac_learner", "nn"), spec, budgets),
                               spec.params.integer("seed"));
  }
  throw ParseError("unknown learner \"" + name + "\" (oig, erm, minrect, p2t)", 0, 0);
}

std::string join_assignment(const Fds& fds, const FdsAssignment& u) {
  std::string out;
  for (std::size_t a = 0; a < u.size(); ++a) {
    if (a > 0) out += ' ';
    out += fds.inputs()[a].domain[u[a]].str();
  }
  return out;
}

Fds fds_for(const ExperimentSpec& spec, const Budgets& budgets) {
  if (spec.fds) return *spec.fds;
  const auto& p = need_problem(spec);
  return encode_transductive(*p.family(), p.points, setting_of(spec.params), p.loss, budgets).fds;
}

std::vector<std::string> lead(const ExperimentSpec& spec) { return {spec.task, spec.instance}; }

// ---- Tasks ------------------------------------------------------------------

TaskResult build_oig_task(const ExperimentSpec& spec, const Budgets& budgets) {
  const auto& p = need_problem(spec);
  const auto setting = setting_of(spec.params);
  const auto h = p.family()->restrict_to(p.points, budgets.nodes);
  const auto oig = build_oig(h, budgets.nodes);
  const auto bip = bipartite_for(p, setting, budgets);
  TaskResult r;
  auto row = lead(spec);
  row.insert(row.end(), {setting_name(setting), std::to_string(p.points.size()),
                         std::to_string(oig.nodes.size()), std::to_string(oig.hyperedges.size()),
                         boolean(oig.is_binary()), std::to_string(bip.left.size()),
                         std::to_string(bip.right.size()), std::to_string(bip.graph.edge_count())});
  r.rows.push_back(std::move(row));
  r.summary = dump(oig) + dump(bip);
  return r;
}

TaskResult orient_task(const ExperimentSpec& spec, const Budgets& budgets) {
  const auto& p = need_problem(spec);
  const auto setting = setting_of(spec.params);
  const auto bip = bipartite_for(p, setting, budgets);
  const auto result = optimal_orientation(bip);
  const auto error = orientation_error(result);
  TaskResult r;
  auto row = lead(spec);
  row.insert(row.end(), {setting_name(setting), std::to_string(result.n), std::to_string(result.k_star)});
  append_rational(row, error);
  r.rows.push_back(std::move(row));
  r.summary = "k_star " + std::to_string(result.k_star) + ", n " + std::to_string(result.n) +
              ", optimal error " + to_string(error) + "\n";
  return r;
}

TaskResult hall_task(const ExperimentSpec& spec, const Budgets& budgets) {
  const auto& p = need_problem(spec);
  const auto setting = setting_of(spec.params);
  const auto eps = hall_complexity(bipartite_for(p, setting, budgets), budgets.subset_nodes);
  TaskResult r;
  auto row = lead(spec);
  row.insert(row.end(), {setting_name(setting), std::to_string(p.points.size())});
  append_rational(row, eps);
  r.rows.push_back(std::move(row));
  r.summary = "hall complexity " + to_string(eps) + "\n";
  return r;
}

TaskResult mad_task(const ExperimentSpec& spec, const Budgets& budgets) {
  const auto& p = need_problem(spec);
  const auto h = p.family()->restrict_to(p.points, budgets.nodes);
  const auto oig = build_oig(h, budgets.nodes);
  const auto mad = max_avg_degree(oig, DensityMode::automatic, budgets.subset_nodes);
  const auto k = optimal_orientation(bipartite_for(p, Setting::realizable, budgets)).k_star;
  const bool sandwich = mad / 2 <= Rational(k) && Rational(k) <= Rational(ceil_of(mad));
  TaskResult r;
  auto row = lead(spec);
  row.push_back(std::to_string(p.points.size()));
  append_rational(row, mad);
  row.insert(row.end(), {std::to_string(k), boolean(sandwich)});
  r.rows.push_back(std::move(row));
  r.summary = "max average degree " + to_string(mad) + ", k_star " + std::to_string(k) +
              (sandwich ? ", within the factor-2 sandwich\n" : ", OUTSIDE the factor-2 sandwich\n");
  return r;
}

TaskResult evaluate_task(const ExperimentSpec& spec, const Budgets& budgets) {
  const auto& p = need_problem(spec);
  const auto setting = setting_of(spec.params);
  const auto name = spec.params.text("learner", "oig");
  LearnerPtr learner;
  if (name == "oig") {
    // S is fixed, so orient this very instance (agnostic included).
    const auto bip = bipartite_for(p, setting, budgets);
    learner = oig_learner(optimal_orientation(bip), bip);
  } else {
    learner = make_transductive(name, spec, budgets);
  }
  const auto worst = worst_case_error(*learner, *p.family(), p.points, setting, p.loss, budgets);
  TaskResult r;
  auto row = lead(spec);
  row.insert(row.end(), {name, setting_name(setting), std::to_string(p.points.size())});
  append_rational(row, worst.error);
  row.push_back(to_string(worst.witness));
  r.rows.push_back(std::move(row));
  r.summary = name + " worst-case " + setting_name(setting) + " error " + to_string(worst.error) +
              " at labeling " + to_string(worst.witness) + "\n";
  return r;
}

std::string estimate_summary(const PacEstimate& est) {
  std::ostringstream s;
  s << "trials " << est.per_trial.size() << ", mean " << to_string(est.mean) << " ("
    << decimal_string(est.mean) << "), median " << to_string(est.quantile(Rational(1, 2)))
    << ", q90 " << to_string(est.quantile(Rational(9, 10))) << ", q95 "
    << to_string(est.quantile(Rational(19, 20))) << ", Pr[loss > 2 mean] "
    << decimal_string(est.exceedance(2 * est.mean)) << "\n";
  return s.str();
}

TaskResult pac_eval_task(const ExperimentSpec& spec, const Budgets& budgets) {
  const auto& p = need_problem(spec);
  const auto setting = setting_of(spec.params);
  const auto name = spec.params.text("learner", "nn");
  const auto pac = make_pac(name, spec, budgets);
  const auto dist = p.finite_distribution();
  std::size_t samples = 0;
  if (spec.params.has("samples")) {
    samples = spec.params.integer("samples");
  } else if (name == "t2p") {
    const auto support = dist.support_points().size();
    samples = reduction_config(spec.params, std::max<std::size_t>(support, 2) - 1, Rational(1, 10),
                               p.loss)
                  .required_samples();
  } else {
    throw ParseError("missing parameter \"samples\"", 0, 0);
  }
  const auto trials = spec.params.integer("trials", 1000);
  const auto seed = spec.params.integer("seed");
  const auto family = p.family();
  const auto est = pac_error_estimate(*pac, dist, samples, trials, seed, setting, p.loss,
                                      family.get(), budgets);
  TaskResult r;
  for (std::size_t t = 0; t < est.per_trial.size(); ++t) {
    auto row = lead(spec);
    row.insert(row.end(), {pac->name(), setting_name(setting), std::to_string(samples), std::to_string(t)});
    append_rational(row, est.per_trial[t]);
    r.rows.push_back(std::move(row));
  }
  r.summary = pac->name() + " with " + std::to_string(samples) + " samples: " + estimate_summary(est);
  return r;
}

TaskResult reduce_task(const ExperimentSpec& spec, const Budgets& budgets) {
  const auto& p = need_problem(spec);
  const auto direction = spec.params.text("direction");
  const auto seed = spec.params.integer("seed");
  const auto family = p.family();
  TaskResult r;
  if (direction == "p2t") {
    const auto pac = make_pac(spec.params.text("learner", "nn"), spec, budgets);
    const auto t = pac_to_transductive(pac, seed);
    const auto worst = worst_case_error(*t, *family, p.points, Setting::realizable, p.loss, budgets);
    auto row = lead(spec);
    row.insert(row.end(), {direction, t->name(), std::to_string(p.points.size()), ""});
    append_rational(row, worst.error);
    row.push_back("");
    r.rows.push_back(std::move(row));
    r.summary = t->name() + " worst-case realizable error " + to_string(worst.error) +
                " at labeling " + to_string(worst.witness) + "\n";
    return r;
  }
  if (direction != "t2p") {
    throw ParseError("parameter \"direction\": expected t2p or p2t, got \"" + direction + "\"", 0, 0);
  }

  const auto t = make_transductive(spec.params.text("learner", "oig"), spec, budgets);
  const auto dist = p.finite_distribution();
  const auto support = dist.support_points();
  const auto eps_trans =
      worst_case_error(*t, *family, support, Setting::realizable, p.loss, budgets).error;
  const auto config = reduction_config(spec.params, std::max<std::size_t>(support.size(), 2) - 1,
                                       eps_trans > 0 ? eps_trans : Rational(1, 10), p.loss);
  const auto pac = transductive_to_pac(t, config);
  const auto samples = config.required_samples();
  const auto trials = spec.params.integer("trials", 1000);
  const auto est =
      pac_error_estimate(*pac, dist, samples, trials, seed, Setting::realizable, p.loss, family.get(), budgets);
  const Rational threshold = 3 * eps_trans;
  for (std::size_t k = 0; k < est.per_trial.size(); ++k) {
    auto row = lead(spec);
    row.insert(row.end(), {direction, pac->name(), std::to_string(samples), std::to_string(k)});
    append_rational(row, est.per_trial[k]);
    row.push_back(boolean(est.per_trial[k] > threshold));
    r.rows.push_back(std::move(row));
  }
  const double delta = to_double(config.delta);
  const double tolerance = 3 * std::sqrt(delta * (1 - delta) / static_cast<double>(trials));
  const auto freq = est.exceedance(threshold);
  std::ostringstream s;
  s << "eps_trans " << to_string(eps_trans) << ", r " << config.repetitions() << ", block "
    << config.block_size << ", holdout " << config.holdout_size() << ", samples " << samples << "\n"
    << "Pr[L > 3 eps_trans] = " << decimal_string(freq) << " vs delta " << to_string(config.delta)
    << " + 3 SE " << tolerance << ": " << (to_double(freq) <= delta + tolerance ? "within" : "EXCEEDS")
    << " bound\n"
    << estimate_summary(est);
  r.summary = s.str();
  return r;
}

TaskResult fds_solve_task(const ExperimentSpec& spec, const Budgets& budgets) {
  const auto fds = fds_for(spec, budgets);
  const auto eps = spec.params.rational("eps");
  const auto outcome = epsilon_assignment(fds, eps, budgets.search_nodes);
  TaskResult r;
  auto row = lead(spec);
  append_rational(row, eps);
  if (const auto* u = std::get_if<FdsAssignment>(&outcome)) {
    row.push_back("true");
    append_rational(row, max_output(fds, *u));
    row.insert(row.end(), {join_assignment(fds, *u), ""});
    r.summary = "eps-assignment found: " + join_assignment(fds, *u) + "\n";
  } else {
    const auto& cert = std::get<FdsInfeasible>(outcome).certificate;
    std::string names;
    for (auto b : cert) names += (names.empty() ? "" : " ") + fds.outputs()[b];
    row.push_back("false");
    append_blank(row, 3);
    row.insert(row.end(), {"", names});
    r.summary = "infeasible at eps " + to_string(eps) + "; certificate outputs: " + names + "\n";
    r.exit_code = 2;
  }
  r.rows.push_back(std::move(row));
  return r;
}

TaskResult fds_minmax_task(const ExperimentSpec& spec, const Budgets& budgets) {
  const auto fds = fds_for(spec, budgets);
  const auto result = min_max_value(fds, budgets.search_nodes);
  TaskResult r;
  auto row = lead(spec);
  append_rational(row, result.value);
  row.push_back(join_assignment(fds, result.witness));
  r.rows.push_back(std::move(row));
  r.summary = "min-max output " + to_string(result.value) + "\n";
  return r;
}

TaskResult compactness_task(const ExperimentSpec& spec, const Budgets& budgets) {
  const auto eps = spec.params.rational("eps");
  bool whole = false;
  bool subsets = false;
  std::size_t checked = 0;
  std::size_t cap = 0;
  if (spec.fds) {
    cap = spec.params.integer("cap", std::min(spec.fds->right_count(), budgets.subset_nodes));
    const auto report = finite_compactness(*spec.fds, eps, cap, std::size_t{1} << 20, budgets.search_nodes);
    whole = report.whole_feasible;
    subsets = report.subsets_feasible;
    checked = report.subsets_checked;
  } else {
    const auto bip = bipartite_for(need_problem(spec), setting_of(spec.params), budgets);
    cap = spec.params.integer("cap", std::min(bip.right.size(), budgets.subset_nodes));
    const auto report = compactness_check(bip, eps, cap);
    whole = report.whole_feasible;
    subsets = report.subsets_feasible;
    checked = report.subsets_checked;
  }
  TaskResult r;
  auto row = lead(spec);
  append_rational(row, eps);
  row.insert(row.end(), {std::to_string(cap), boolean(whole), boolean(subsets),
                         std::to_string(checked), boolean(whole == subsets)});
  r.rows.push_back(std::move(row));
  r.summary = "whole " + std::string(whole ? "feasible" : "infeasible") + ", " +
              std::to_string(checked) + " subsets checked, " +
              (subsets ? "all feasible" : "an infeasible one found") + "\n";
  return r;
}

std::string scalar_text(const Json& value, const std::string& path) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  if (value.is_number()) return to_string(detail::rational_from(value, path));
  detail::schema_error(path, "expected a string, number or boolean");
}

}  // namespace

std::vector<std::string> task_header(const std::string& task) {
  const std::vector<std::string> base{"task", "instance"};
  if (task == "build-oig") {
    return concat(base, {"setting", "n", "nodes", "hyperedges", "binary", "left", "right", "edges"});
  }
  if (task == "orient") {
    return concat(concat(base, {"setting", "n", "k_star"}), rational_columns("error"));
  }
  if (task == "hall") return concat(concat(base, {"setting", "n"}), rational_columns("eps"));
  if (task == "mad") {
    return concat(concat(concat(base, {"n"}), rational_columns("mad")), {"k_star", "sandwich"});
  }
  if (task == "evaluate") {
    return concat(concat(concat(base, {"learner", "setting", "n"}), rational_columns("worst_error")),
                  {"witness"});
  }
  if (task == "pac-eval") {
    return concat(concat(base, {"learner", "setting", "samples", "trial"}), rational_columns("loss"));
  }
  if (task == "reduce") {
    return concat(concat(concat(base, {"direction", "learner", "samples", "trial"}), rational_columns("value")),
                  {"exceeds"});
  }
  if (task == "fds-solve") {
    return concat(concat(concat(concat(base, rational_columns("eps")), {"feasible"}),
                         rational_columns("max_output")),
                  {"assignment", "certificate"});
  }
  if (task == "fds-minmax") return concat(concat(base, rational_columns("value")), {"assignment"});
  if (task == "compactness") {
    return concat(concat(base, rational_columns("eps")),
                  {"cap", "whole_feasible", "subsets_feasible", "subsets_checked", "consistent"});
  }
  throw ParseError("unknown task \"" + task + "\"", 0, 0);
}

TaskResult run_task(const ExperimentSpec& spec, const Budgets& budgets) {
  TaskResult r;
  const auto& t = spec.task;
  if (t == "build-oig") r = build_oig_task(spec, budgets);
  else if (t == "orient") r = orient_task(spec, budgets);
  else if (t == "hall") r = hall_task(spec, budgets);
  else if (t == "mad") r = mad_task(spec, budgets);
  else if (t == "evaluate") r = evaluate_task(spec, budgets);
  else if (t == "pac-eval") r = pac_eval_task(spec, budgets);
  else if (t == "reduce") r = reduce_task(spec, budgets);
  else if (t == "fds-solve") r = fds_solve_task(spec, budgets);
  else if (t == "fds-minmax") r = fds_minmax_task(spec, budgets);
  else if (t == "compactness") r = compactness_task(spec, budgets);
  else throw ParseError("unknown task \"" + t + "\"", 0, 0);
  r.header = task_header(t);
  return r;
}

TaskResult sweep(const ExperimentSpec& spec, const Budgets& budgets) {
  std::vector<std::string> keys;
  std::size_t points = spec.grid.empty() ? 0 : 1;
  for (const auto& [key, values] : spec.grid) {
    keys.push_back(key);
    points *= values.size();
  }
  const auto header = task_header(spec.task);
  TaskResult out;
  out.header = concat(concat(keys, header), {"status", "message"});

  std::vector<std::vector<std::vector<std::string>>> rows(points);
  std::vector<std::string> summaries(points);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < points; i = next++) {
      std::vector<std::string> prefix(keys.size());
      ExperimentSpec local = spec;
      local.grid.clear();
      std::size_t rest = i;
      for (std::size_t k = keys.size(); k-- > 0;) {
        const auto& values = spec.grid.at(keys[k]);
        prefix[k] = values[rest % values.size()];
        rest /= values.size();
      }
      try {
        for (std::size_t k = 0; k < keys.size(); ++k) {
          if (keys[k] == "n") {
            std::size_t used = 0;
            const auto n = std::stoull(prefix[k], &used);
            if (used != prefix[k].size()) throw ParseError("grid n: expected an integer", 0, 0);
            local.problem = need_problem(spec).prefix(n);
          } else {
            local.params.set(keys[k], prefix[k]);
          }
        }
        const auto result = run_task(local, budgets);
        for (const auto& r : result.rows) {
          rows[i].push_back(concat(concat(prefix, r), {result.exit_code == 2 ? "infeasible" : "ok", ""}));
        }
        summaries[i] = result.summary;
      } catch (const std::exception& e) {
        auto row = prefix;
        row.insert(row.end(), {spec.task, spec.instance});
        append_blank(row, header.size() - 2);
        row.insert(row.end(), {"error", e.what()});
        rows[i].push_back(std::move(row));
        summaries[i] = std::string("error: ") + e.what() + "\n";
      }
    }
  };
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(points, 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (std::size_t i = 0; i < points; ++i) {
    for (auto& r : rows[i]) out.rows.push_back(std::move(r));
    out.summary += "point " + std::to_string(i) + ": " + summaries[i];
  }
  return out;
}

ExperimentSpec parse_experiment(std::string_view json_text, const std::string& base_dir) {
  const Json doc = detail::parse_json(json_text);
  if (!doc.is_object()) detail::schema_error("$", "expected an object");
  ExperimentSpec spec;
  spec.task = detail::string_from(detail::require(doc, "task", "$"), "$.task");
  if (std::find(task_names().begin(), task_names().end(), spec.task) == task_names().end()) {
    detail::schema_error("$.task", "unknown task \"" + spec.task + "\"");
  }
  const auto resolve = [&](const std::string& file) {
    const std::filesystem::path path(file);
    if (path.is_absolute() || base_dir.empty() || base_dir == ".") return path.string();
    return (std::filesystem::path(base_dir) / path).string();
  };
  if (const auto it = doc.find("problem"); it != doc.end()) {
    spec.problem = parse_problem(it->dump());
  } else if (const auto f = doc.find("problem_file"); f != doc.end()) {
    spec.problem = parse_problem(read_file(resolve(detail::string_from(*f, "$.problem_file"))));
  }
  if (const auto it = doc.find("fds"); it != doc.end()) {
    spec.fds = parse_fds(it->dump());
  } else if (const auto f = doc.find("fds_file"); f != doc.end()) {
    spec.fds = parse_fds(read_file(resolve(detail::string_from(*f, "$.fds_file"))));
  }
  if (const auto it = doc.find("params"); it != doc.end()) {
    if (!it->is_object()) detail::schema_error("$.params", "expected an object");
    for (const auto& [key, value] : it->items()) {
      spec.params.set(key, scalar_text(value, "$.params." + key));
    }
  }
  if (const auto it = doc.find("grid"); it != doc.end()) {
    if (!it->is_object()) detail::schema_error("$.grid", "expected an object");
    for (const auto& [key, values] : it->items()) {
      if (!values.is_array()) detail::schema_error("$.grid." + key, "expected an array");
      auto& column = spec.grid[key];
      for (std::size_t i = 0; i < values.size(); ++i) {
        column.push_back(scalar_text(values[i], "$.grid." + key + "[" + std::to_string(i) + "]"));
      }
    }
  }
  if (const auto it = doc.find("output"); it != doc.end()) spec.output = resolve(detail::string_from(*it, "$.output"));
  if (const auto it = doc.find("instance"); it != doc.end()) {
    spec.instance = detail::string_from(*it, "$.instance");
  } else if (spec.problem && !spec.problem->name.empty()) {
    spec.instance = spec.problem->name;
  } else {
    spec.instance = "inline";
  }
  return spec;
}

std::string serialize_experiment(const ExperimentSpec& spec) {
  OrderedJson doc;
  doc["task"] = spec.task;
  doc["instance"] = spec.instance;
  if (spec.problem) doc["problem"] = OrderedJson::parse(serialize_problem(*spec.problem));
  if (spec.fds) doc["fds"] = OrderedJson::parse(serialize_fds(*spec.fds));
  auto params = OrderedJson::object();
  for (const auto& [key, value] : spec.params.values()) params[key] = value;
  doc["params"] = std::move(params);
  if (!spec.grid.empty()) {
    auto grid = OrderedJson::object();
    for (const auto& [key, values] : spec.grid) grid[key] = values;
    doc["grid"] = std::move(grid);
  }
  if (!spec.output.empty()) doc["output"] = spec.output;
  return detail::canonical_dump(doc);
}

int run(const ExperimentSpec& spec, const Budgets& budgets, std::ostream& csv, std::ostream& log,
        bool as_sweep) {
  const auto start = std::chrono::steady_clock::now();
  try {
    const TaskResult result = as_sweep ? sweep(spec, budgets) : run_task(spec, budgets);
    const auto text = to_csv(result.header, result.rows);
    if (spec.output.empty()) {
      csv << text;
    } else {
      std::ofstream file(spec.output, std::ios::binary);
      if (!file) throw Error("cannot write " + spec.output);
      file << text;
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    log << result.summary << "wall_ms " << elapsed.count() << "\n";
    return result.exit_code;
  } catch (const ParseError& e) {
    log << "error: ";
    if (e.line() > 0) log << "line " << e.line() << ", column " << e.column() << ": ";
    log << e.what() << "\n";
  } catch (const BudgetExceeded& e) {
    log << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
  }
  return 1;
}

}  // namespace oiglab
