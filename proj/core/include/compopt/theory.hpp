#pragma once

#include <optional>
#include <vector>

#include "compopt/problem.hpp"

namespace compopt {

// Smoothness/boundedness constants of the problem class. Estimated values
// are empirical maxima over samples, i.e. lower bounds of the true suprema;
// callers that need conservative step sizes should scale them up (the
// experiment harness multiplies by a configurable safety factor).
struct ProblemConstants {
  double B_F = 0.0;  // bound on ||grad F_i||
  double L_F = 0.0;  // Lipschitz constant of grad F_i
  double B_G = 0.0;  // bound on ||dG_j|| (spectral)
  double L_G = 0.0;  // Lipschitz constant of dG_j
  double L_f = 0.0;  // smoothness of the composition x -> F_i(G(x))
  double R_x = 0.0;  // level-set radius: lambda R_x = max ||x* - x||^2 over
                     // {x : F(G(x)) <= F(G(x0))}
};

// Empirical maxima over the sample points and `pairs` random point pairs.
// B_G and L_G use a power-iteration spectral-norm surrogate (50 iterations).
// R_x comes from a level-set sweep along random directions from
// sample_points[0]; it needs the problem's optimum oracle and is left 0
// when none exists. Deterministic given seed.
ProblemConstants estimate_constants(const CompositionProblem& p,
                                    const std::vector<Vector>& sample_points,
                                    int pairs, std::uint64_t seed);

struct SvrgBound {
  std::optional<double> eta_max;  // nullopt: bound vacuous for these constants
  bool vacuous = false;
  bool batch_ok = true;  // convex branch: A >= 2 R_x B_G^4 L_F^2 / d
  double q = 0.0;        // non-convex branch auxiliary
  double ab_lo = 0.0;    // admissible a/b interval at eta_max
  double ab_hi = 0.0;
  double d2_or_e2 = 0.0;  // evaluated at the interval midpoint, b = 1
};

// Step-size bound for the epoch (snapshot) variant. Non-convex branch needs
// only the constants; convex branch additionally needs d in (0, 1).
SvrgBound svrg_step_bound(const ProblemConstants& c, double lambda, int n, int A,
                          bool convex_outer, std::optional<double> d = std::nullopt);

struct SagaBound {
  double A_min = 0.0;
  std::optional<double> eta_max;
  bool feasible = true;
  double Y1 = 0.0, Y2 = 0.0, Y3 = 0.0;  // non-convex branch auxiliaries
  double Y = 0.0;                       // convex branch auxiliary
};

// Batch/step bounds for the table variant. The two displays couple A and
// eta; exactly one of (A, eta) may be left unset and is resolved, where
// needed, by fixed-point iteration (tol 1e-12, max 1000 iterations).
SagaBound saga_bounds(const ProblemConstants& c, double lambda, int n,
                      std::optional<int> A, std::optional<double> eta,
                      bool convex_outer, std::optional<double> d = std::nullopt);

struct ContractionResult {
  std::optional<double> factor;  // nullopt: empty admissible a/b interval
  bool feasible = true;
  bool contractive = false;  // factor < 1
  double a_over_b = 0.0;
};

// Per-epoch contraction factor 1/(eta lambda K) + d2/(a eta lambda) (or the
// e2 variant), with a/b at the midpoint of the admissible interval, b = 1.
ContractionResult svrg_contraction_factor(const ProblemConstants& c, double lambda,
                                          int n, int K, int A, double eta,
                                          bool convex_outer,
                                          std::optional<double> d = std::nullopt);

}  // namespace compopt
