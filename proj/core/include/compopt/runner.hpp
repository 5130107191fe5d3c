#pragma once

#include <memory>
#include <string>
#include <vector>

#include "compopt/config.hpp"
#include "compopt/problem.hpp"

namespace compopt {

struct RunResult {
  std::string cell;       // e.g. "k10_A50"
  std::string label;      // algorithm label from the config
  std::string csv_path;   // empty when the run diverged before producing a trace
  bool diverged = false;
  std::string error;
  double final_objective = 0.0;
  double final_gap = 0.0;  // NaN without an optimum oracle
  std::uint64_t g_queries = 0;
  std::uint64_t total_queries = 0;
};

struct ExperimentSummary {
  std::vector<RunResult> results;  // merge-ordered by (cell, algorithm)
  bool all_ok = true;
};

// Builds one problem per (kappa, batch) cell, runs every configured
// algorithm on it, writes one CSV per run plus summary.txt (and one SVG per
// cell when plotting is on) under cfg.out_dir. Cells may run in parallel
// (jobs > 1); each run is single-threaded and owns all of its state.
ExperimentSummary run_experiment(const ExperimentConfig& cfg, int jobs = 1);

// Problem construction used by run_experiment, exposed for the gradcheck
// subcommand and tests.
std::unique_ptr<CompositionProblem> build_problem(const ProblemSpec& spec, double kappa);

std::string format_summary(const ExperimentSummary& summary);

}  // namespace compopt
