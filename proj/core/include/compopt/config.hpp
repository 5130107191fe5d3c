#pragma once

#include <optional>
#include <string>
#include <vector>

#include "compopt/algorithms.hpp"

namespace compopt {

enum class ProblemFamily { kMeanVariance, kBellman, kSplitQuadratic };

struct ProblemSpec {
  ProblemFamily family = ProblemFamily::kMeanVariance;
  int n = 0;   // outer components (mean-variance: shared with m)
  int m = 0;   // inner components (bellman)
  int N = 0;   // decision dimension
  int M = 0;   // inner output dimension (bellman)
  std::vector<double> kappas = {1.0};  // mean-variance grid
  double lambda = 0.0;
  std::uint64_t seed = 0;
  bool explicit_strong_convexity = false;
};

struct AlgorithmSpec {
  std::string label;
  std::string name;  // scdf | scdf-svrg | scdf-saga | sgd | sgd-exact | scgd | c-svrg
  RunConfig run;
  bool batch_from_cell = true;  // take A from the experiment's batch grid
  SgdInnerMode sgd_mode = SgdInnerMode::kSingleSample;
  ScgdSchedule scgd = ScgdSchedule::constant(0.0, 1.0);
  int line = 0;  // section line in the config text, for diagnostics
};

struct ExperimentConfig {
  ProblemSpec problem;
  std::vector<int> batches = {1};  // mini-batch grid; cells = kappas x batches
  std::vector<AlgorithmSpec> algorithms;
  std::string out_dir = "out";
  int record_every = 1;
  bool plot = false;
  bool timing = true;
  std::string x0 = "zero";  // zero | gaussian
};

struct ParseError {
  int line = 0;
  std::string message;
};

struct ParseResult {
  std::optional<ExperimentConfig> config;  // set iff errors is empty
  std::vector<ParseError> errors;
};

// Flat `key = value` format with one [label] section per algorithm; see the
// README for the full grammar. All errors are collected, not just the first.
ParseResult parse_config(const std::string& text);

}  // namespace compopt
