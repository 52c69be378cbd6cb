// oiglab: command-line front end for the one-inclusion graph toolkit.

#include "oiglab/cli.hpp"
#include "oiglab/errors.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

struct Flag {
  std::string option;  // command-line spelling without dashes
  std::string param;   // experiment parameter it sets
  std::string help;
};

const std::vector<Flag> kSetting{{"setting", "setting", "realizable or agnostic"}};

/// Options of one task subcommand, copied into ExperimentSpec params when
/// given.
class TaskCommand {
 public:
  TaskCommand(CLI::App& parent, std::string task, const std::string& help,
              const std::vector<Flag>& flags, bool wants_fds = false)
      : task_(std::move(task)), flags_(flags) {
    app_ = parent.add_subcommand(task_, help);
    app_->add_option("--spec", problem_file_, "problem JSON file");
    if (wants_fds) app_->add_option("--fds", fds_file_, "FDS JSON file");
    for (const auto& f : flags_) app_->add_option("--" + f.option, values_[f.param], f.help);
  }

  CLI::App* app() const { return app_; }

  oiglab::ExperimentSpec spec(const std::map<std::string, std::string>& global) const {
    oiglab::ExperimentSpec spec;
    spec.task = task_;
    if (!problem_file_.empty()) spec.problem = oiglab::parse_problem(oiglab::read_file(problem_file_));
    if (!fds_file_.empty()) spec.fds = oiglab::parse_fds(oiglab::read_file(fds_file_));
    if (spec.problem && !spec.problem->name.empty()) {
      spec.instance = spec.problem->name;
    } else {
      const auto& file = problem_file_.empty() ? fds_file_ : problem_file_;
      spec.instance = file.empty() ? "inline" : std::filesystem::path(file).stem().string();
    }
    for (const auto& f : flags_) {
      if (app_->count("--" + f.option) > 0) spec.params.set(f.param, values_.at(f.param));
    }
    for (const auto& [key, value] : global) spec.params.set(key, value);
    return spec;
  }

 private:
  std::string task_;
  std::vector<Flag> flags_;
  CLI::App* app_ = nullptr;
  std::string problem_file_;
  std::string fds_file_;
  std::map<std::string, std::string> values_;
};

std::vector<Flag> with(std::vector<Flag> a, const std::vector<Flag>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transductive learning via one-inclusion graphs: orientations, matchings, "
               "reductions and FDS solving"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string seed;
  std::size_t budget_nodes = 0;
  std::size_t budget_subsets = 0;
  std::string out;
  app.add_option("--seed", seed, "master seed for stochastic tasks");
  app.add_option("--budget-nodes", budget_nodes, "labeling/node budget (default 4096 or OIGLAB_BUDGET_NODES)");
  app.add_option("--budget-subsets", budget_subsets, "ground set size for exact subset enumeration");
  app.add_option("--out", out, "CSV output path (default stdout)");

  const Flag learner{"learner", "learner", "learner name"};
  const Flag eps{"eps", "eps", "epsilon, e.g. 1/3 or 0.25"};
  std::vector<TaskCommand> tasks;
  tasks.reserve(16);
  tasks.emplace_back(app, "build-oig", "build the OIG and its bipartite form", kSetting);
  tasks.emplace_back(app, "orient", "optimal orientation (k_star and error)", kSetting);
  tasks.emplace_back(app, "hall", "Hall complexity by subset enumeration", kSetting);
  tasks.emplace_back(app, "mad", "maximum average degree and the factor-2 sandwich",
                     std::vector<Flag>{});
  tasks.emplace_back(app, "evaluate", "exact worst-case transductive error",
                     with(kSetting, {{"learner", "learner", "oig, erm, minrect or p2t"},
                                     {"tiebreak", "tiebreak", "erm: first, adversarial or seeded"},
                                     {"pac-learner", "pac_learner", "p2t: constant, nn or minrect"}}));
  tasks.emplace_back(app, "pac-eval", "Monte Carlo PAC error, one row per trial",
                     with(kSetting, {{"learner", "learner", "constant, nn, minrect or t2p"},
                                     {"transductive", "transductive", "t2p: inner learner"},
                                     {"constant", "constant", "constant: predicted label"},
                                     {"samples", "samples", "samples per trial"},
                                     {"trials", "trials", "number of trials"},
                                     {"delta", "delta", "t2p confidence"},
                                     {"holdout-eps", "holdout_eps", "t2p holdout accuracy"},
                                     {"block", "block", "t2p block size"}}));
  tasks.emplace_back(app, "reduce", "PAC <-> transductive reductions",
                     std::vector<Flag>{{"direction", "direction", "t2p or p2t"},
                                       learner,
                                       {"delta", "delta", "confidence parameter"},
                                       {"trials", "trials", "Monte Carlo trials (t2p)"},
                                       {"holdout-eps", "holdout_eps", "holdout accuracy (t2p)"},
                                       {"block", "block", "datapoints per transductive call (t2p)"},
                                       {"repetitions", "repetitions", "override r (t2p)"},
                                       {"holdout", "holdout", "override m (t2p)"}});
  tasks.emplace_back(app, "compactness", "whole versus finite-subset feasibility",
                     with(kSetting, {eps, {"cap", "cap", "largest subset size"}}), true);

  auto* fds = app.add_subcommand("fds", "functional dependency structures");
  fds->require_subcommand(1);
  tasks.emplace_back(*fds, "solve", "search for an eps-assignment (exit 2 when infeasible)",
                     with(kSetting, {eps}), true);
  tasks.emplace_back(*fds, "minmax", "least achievable maximum output", kSetting, true);

  std::string experiment_file;
  auto* run_cmd = app.add_subcommand("run", "run an experiment JSON file");
  run_cmd->add_option("experiment", experiment_file, "experiment file")->required();
  auto* sweep_cmd = app.add_subcommand("sweep", "run an experiment over its parameter grid");
  sweep_cmd->add_option("experiment", experiment_file, "experiment file")->required();
  std::string canonical_file;
  auto* canonical_cmd = app.add_subcommand("canonical", "print the canonical form of a problem JSON file");
  canonical_cmd->add_option("problem", canonical_file, "problem file")->required();

  CLI11_PARSE(app, argc, argv);

  auto budgets = oiglab::Budgets::from_environment();
  if (budget_nodes > 0) budgets.nodes = budget_nodes;
  if (budget_subsets > 0) budgets.subset_nodes = budget_subsets;
  std::map<std::string, std::string> global;
  if (!seed.empty()) global["seed"] = seed;

  try {
    if (canonical_cmd->parsed()) {
      std::cout << oiglab::serialize_problem(oiglab::parse_problem(oiglab::read_file(canonical_file)));
      return 0;
    }
    if (run_cmd->parsed() || sweep_cmd->parsed()) {
      const auto base = std::filesystem::path(experiment_file).parent_path().string();
      auto spec = oiglab::parse_experiment(oiglab::read_file(experiment_file), base.empty() ? "." : base);
      for (const auto& [key, value] : global) spec.params.set(key, value);
      if (!out.empty()) spec.output = out;
      return oiglab::run(spec, budgets, std::cout, std::cerr, sweep_cmd->parsed());
    }
    for (const auto& t : tasks) {
      if (!t.app()->parsed()) continue;
      auto spec = t.spec(global);
      if (spec.task == "solve" || spec.task == "minmax") spec.task = "fds-" + spec.task;
      spec.output = out;
      return oiglab::run(spec, budgets, std::cout, std::cerr);
    }
  } catch (const oiglab::ParseError& e) {
    std::cerr << "error: ";
    if (e.line() > 0) std::cerr << "line " << e.line() << ", column " << e.column() << ": ";
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
