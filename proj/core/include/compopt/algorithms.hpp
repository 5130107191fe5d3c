#pragma once

#include <optional>

#include "compopt/estimators.hpp"
#include "compopt/problem.hpp"

namespace compopt {

struct RunConfig {
  double eta = 0.0;
  int epochs = 1;       // S
  int inner_iters = 0;  // K
  int batch = 1;        // A
  int record_every = 1;
  std::uint64_t seed = 0;
  // Budget on g-oracle queries (g_evals + g_jacs); a step whose g-cost
  // would exceed it is not taken.
  std::optional<std::uint64_t> max_g_queries;
  // Optimum value for the trace's gap column; NaN gap when absent.
  std::optional<double> p_star;
  bool timing = true;
};

enum class SgdInnerMode {
  kSingleSample,  // biased: G_j(x) stands in for G(x), 2 g-queries/step
  kExactInner,    // exact G(x), dG(x), 2m g-queries/step
};

struct ScgdSchedule {
  enum Kind { kConstant, kPolynomial } kind = kConstant;
  double alpha = 0.0;  // constant step / polynomial coefficient a
  double beta = 1.0;   // constant tracker weight / polynomial coefficient b

  static ScgdSchedule constant(double alpha, double beta) {
    return {kConstant, alpha, beta};
  }
  // alpha_k = a k^{-3/4}, beta_k = b k^{-1/2}, k >= 1.
  static ScgdSchedule polynomial(double a, double b) {
    return {kPolynomial, a, b};
  }
};

// Duality-free composition method with exact inner function. n dual vectors
// beta_i, initialized beta_i = lambda x0, coupled to the primal iterate by
// lambda x = (1/n) sum_i beta_i throughout. Runs epochs*inner_iters steps.
// Requires lambda > 0.
Trace run_scdf(const CompositionProblem& p, const Vector& x0, const RunConfig& cfg);

// Epoch variant: the inner function and its Jacobian are replaced by the
// snapshot-anchored estimates; epoch outputs are the running averages of the
// inner iterates and dual vectors, and the next epoch restarts from them.
Trace run_scdf_svrg(const CompositionProblem& p, const Vector& x0, const RunConfig& cfg);

// Table variant: per-index stored points, incremental averages, no epochs.
// Runs epochs*inner_iters steps after table initialization.
Trace run_scdf_saga(const CompositionProblem& p, const Vector& x0, const RunConfig& cfg);

// Baselines. All primal-only baselines include the regularizer gradient
// lambda x in their update so they target the same objective P.
Trace run_sgd(const CompositionProblem& p, const Vector& x0, const RunConfig& cfg,
              SgdInnerMode mode);

// Two-timescale baseline: y tracks the inner function through a convex
// combination, x follows the quasi-gradient at the tracker.
Trace run_scgd(const CompositionProblem& p, const Vector& x0, const RunConfig& cfg,
               const ScgdSchedule& schedule);

// Compositional SVRG baseline (primal only): snapshot-anchored control
// variate on the full composition gradient.
Trace run_compositional_svrg(const CompositionProblem& p, const Vector& x0,
                             const RunConfig& cfg);

// Recorded squared gradient-estimate norms, in row order (initial rows
// without an estimate are skipped).
std::vector<double> gradient_estimate_norm_monitor(const Trace& trace);

}  // namespace compopt
