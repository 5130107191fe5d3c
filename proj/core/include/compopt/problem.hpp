#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace compopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Known minimizer of the regularized objective, see optimum_oracle().
struct Optimum {
  Vector x_star;
  double p_star = 0.0;
};

// Two-level finite-sum problem
//   P(x) = (1/n) sum_i F_i( (1/m) sum_j G_j(x) ) + (lambda/2) ||x||^2,
// with G_j : R^N -> R^M and F_i : R^M -> R. All evaluations must be
// deterministic pure functions of (index, point).
class CompositionProblem {
 public:
  virtual ~CompositionProblem() = default;

  virtual int n() const = 0;      // number of outer components F_i
  virtual int m() const = 0;      // number of inner components G_j
  virtual int dim_x() const = 0;  // N
  virtual int dim_y() const = 0;  // M
  virtual double lambda() const = 0;

  virtual Vector eval_g(int j, const Vector& x) const = 0;
  virtual Matrix jac_g(int j, const Vector& x) const = 0;
  virtual double eval_f(int i, const Vector& y) const = 0;
  virtual Vector grad_f(int i, const Vector& y) const = 0;

  // Closed-form or high-accuracy optimum when the problem family provides
  // one; nullopt otherwise.
  virtual std::optional<Optimum> compute_optimum() const { return std::nullopt; }
};

// Per-run tally of individual oracle evaluations. The g-oracle count
// (g_evals + g_jacs) is the budget metric used throughout.
struct QueryCounter {
  std::uint64_t g_evals = 0;
  std::uint64_t g_jacs = 0;
  std::uint64_t f_evals = 0;
  std::uint64_t f_grads = 0;

  std::uint64_t g_oracle() const { return g_evals + g_jacs; }
  std::uint64_t total() const { return g_evals + g_jacs + f_evals + f_grads; }
};

struct TraceRow {
  long iter = 0;
  std::uint64_t queries = 0;  // cumulative total oracle queries
  double objective = 0.0;
  double gap = 0.0;  // NaN when no optimum oracle is available
  double grad_est_sq = 0.0;
  double ms = 0.0;
};

struct Trace {
  std::vector<TraceRow> rows;
  QueryCounter counter;
  Vector x_final;
  // Largest relative violation of lambda x = (1/n) sum_i beta_i seen at any
  // recorded row; 0 for algorithms without a dual state.
  double max_coupling_violation = 0.0;
};

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DivergenceError : std::runtime_error {
  DivergenceError(const std::string& what, long iter)
      : std::runtime_error(what), iteration(iter) {}
  long iteration;
};

inline void require_dim(const Vector& v, int expected, const char* what) {
  if (v.size() != expected) throw DimensionError(std::string(what) + ": dimension mismatch");
}

}  // namespace compopt
