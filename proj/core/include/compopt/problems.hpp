#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <vector>

#include "compopt/problem.hpp"

namespace compopt {

// Mean-variance portfolio benchmark. Shared index set: n = m, one reward
// vector r_i per component.
//   G_j(x) = [x; <r_j, x>]             (dim_y = N + 1)
//   F_i(y) = -<r_i, y1> + (<r_i, y1> - y2)^2,  y = [y1; y2]
// With explicit_strong_convexity set, (lambda/2)||y1||^2 is subtracted
// inside each F_i while R(x) is kept, so the net objective equals the
// unregularized one but the solver still sees a lambda-strongly-convex R.
class MeanVarianceProblem final : public CompositionProblem {
 public:
  MeanVarianceProblem(std::vector<Vector> rewards, double lambda,
                      bool explicit_strong_convexity = false);

  int n() const override { return static_cast<int>(rewards_.size()); }
  int m() const override { return n(); }
  int dim_x() const override { return dim_x_; }
  int dim_y() const override { return dim_x_ + 1; }
  double lambda() const override { return lambda_; }

  Vector eval_g(int j, const Vector& x) const override;
  Matrix jac_g(int j, const Vector& x) const override;
  double eval_f(int i, const Vector& y) const override;
  Vector grad_f(int i, const Vector& y) const override;

  // Newton polish on the (quadratic) objective until ||grad P|| <= 1e-12;
  // cached per instance. Throws on non-convergence.
  std::optional<Optimum> compute_optimum() const override;

  const std::vector<Vector>& rewards() const { return rewards_; }

 private:
  std::vector<Vector> rewards_;
  int dim_x_;
  double lambda_;
  bool explicit_sc_;
  // Held by pointer so instances stay movable.
  mutable std::unique_ptr<std::mutex> opt_mutex_ = std::make_unique<std::mutex>();
  mutable std::optional<Optimum> cached_opt_;
};

// Least-squares toy with averaged affine inner maps:
//   G_j(x) = B_j x - b_j, n = 1, F(y) = ||y||^2.
// Objective equals ||Bbar x - bbar||^2 + (lambda/2)||x||^2 with closed-form
// optimum (2 Bbar^T Bbar + lambda I) x = 2 Bbar^T bbar.
class BellmanToyProblem final : public CompositionProblem {
 public:
  BellmanToyProblem(std::vector<Matrix> B, std::vector<Vector> b, double lambda);

  int n() const override { return 1; }
  int m() const override { return static_cast<int>(B_.size()); }
  int dim_x() const override { return static_cast<int>(B_[0].cols()); }
  int dim_y() const override { return static_cast<int>(B_[0].rows()); }
  double lambda() const override { return lambda_; }

  Vector eval_g(int j, const Vector& x) const override;
  Matrix jac_g(int j, const Vector& x) const override;
  double eval_f(int i, const Vector& y) const override;
  Vector grad_f(int i, const Vector& y) const override;

  std::optional<Optimum> compute_optimum() const override;

  const Matrix& mean_B() const { return mean_B_; }
  const Vector& mean_b() const { return mean_b_; }

 private:
  std::vector<Matrix> B_;
  std::vector<Vector> b_;
  Matrix mean_B_;
  Vector mean_b_;
  double lambda_;
};

// Strongly convex quadratic split into one concave and one convex outer
// component (n = 2, m = 1, G identity):
//   F_1(y) = -||y||^2,  F_2(y) = 3||y||^2 - 2<c, y>
//   P(x)   = ||x||^2 - <c, x> + (lambda/2)||x||^2.
// Each F_i is not convex (F_1 is concave) yet P is strongly convex.
class SplitQuadraticProblem final : public CompositionProblem {
 public:
  SplitQuadraticProblem(Vector c, double lambda);

  int n() const override { return 2; }
  int m() const override { return 1; }
  int dim_x() const override { return static_cast<int>(c_.size()); }
  int dim_y() const override { return static_cast<int>(c_.size()); }
  double lambda() const override { return lambda_; }

  Vector eval_g(int j, const Vector& x) const override;
  Matrix jac_g(int j, const Vector& x) const override;
  double eval_f(int i, const Vector& y) const override;
  Vector grad_f(int i, const Vector& y) const override;

  std::optional<Optimum> compute_optimum() const override;

 private:
  Vector c_;
  double lambda_;
};

// Rewards drawn i.i.d. Gaussian with covariance Sigma = Q diag(s) Q^T,
// s log-spaced in [1, kappa], Q a seeded random orthogonal matrix, so
// cond(Sigma) = kappa exactly. Deterministic given seed.
MeanVarianceProblem generate_mean_variance(int n, int N, double kappa,
                                           std::uint64_t seed,
                                           double lambda = 0.0,
                                           bool explicit_strong_convexity = false);

// B_j, b_j i.i.d. standard Gaussian; deterministic given seed.
BellmanToyProblem generate_bellman_toy(int m, int M, int N, double lambda,
                                       std::uint64_t seed);

SplitQuadraticProblem generate_split_quadratic(int N, double lambda,
                                               std::uint64_t seed);

// The covariance matrix generate_mean_variance draws from; exposed so its
// condition number can be verified directly.
Matrix mean_variance_covariance(int N, double kappa, std::uint64_t seed);

// Closed-form (Bellman, split-quadratic) or cached numerical (mean-variance)
// optimum. Throws std::runtime_error for problems without one.
Optimum optimum_oracle(const CompositionProblem& p);

// Flat text format: header line "n N lambda", then n whitespace-separated
// reward rows. Round-trips a MeanVarianceProblem without its seed.
void save_mean_variance(const MeanVarianceProblem& p, std::ostream& os);
MeanVarianceProblem load_mean_variance(std::istream& is);

}  // namespace compopt
