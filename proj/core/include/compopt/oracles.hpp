#pragma once

#include <string>
#include <vector>

#include "compopt/problem.hpp"

namespace compopt {

// Exact full-batch oracles. Each call meters the stated number of
// individual oracle evaluations on the supplied counter.

// G(x) = (1/m) sum_j G_j(x); meters m g_evals.
Vector inner_value(const CompositionProblem& p, const Vector& x, QueryCounter& qc);

// dG(x) = (1/m) sum_j dG_j(x); meters m g_jacs.
Matrix inner_jacobian(const CompositionProblem& p, const Vector& x, QueryCounter& qc);

// grad P(x) = dG(x)^T * (1/n) sum_i grad F_i(G(x)) + lambda x.
// Meters m g_evals, m g_jacs, n f_grads.
Vector full_gradient(const CompositionProblem& p, const Vector& x, QueryCounter& qc);

// P(x) = (1/n) sum_i F_i(G(x)) + (lambda/2)||x||^2.
// Meters m g_evals, n f_evals.
double objective(const CompositionProblem& p, const Vector& x, QueryCounter& qc);

// Unmetered variants for diagnostics and trace recording.
Vector inner_value(const CompositionProblem& p, const Vector& x);
Matrix inner_jacobian(const CompositionProblem& p, const Vector& x);
Vector full_gradient(const CompositionProblem& p, const Vector& x);
double objective(const CompositionProblem& p, const Vector& x);

// One finite-difference mismatch found by check_gradients.
struct GradCheckEntry {
  std::string kind;   // "jac_g" or "grad_f"
  int index = 0;      // j or i
  int point = 0;      // index into trial_points
  int row = 0, col = 0;
  double rel_error = 0.0;
  bool finite = true;
};

struct GradCheckReport {
  bool passed = true;
  double max_rel_error = 0.0;
  std::vector<GradCheckEntry> worst;  // per-(kind,index) maxima
};

// Central-difference comparison of jac_g vs eval_g and grad_f vs eval_f at
// each trial point. Step h = 1e-6 * (1 + ||x||). Non-finite evaluations are
// flagged in the report, never thrown.
GradCheckReport check_gradients(const CompositionProblem& p,
                                const std::vector<Vector>& trial_points,
                                double tol);

}  // namespace compopt
