#include "compopt/oracles.hpp"

#include <cmath>

namespace compopt {

Vector inner_value(const CompositionProblem& p, const Vector& x, QueryCounter& qc) {
  const Vector g = inner_value(p, x);
  qc.g_evals += static_cast<std::uint64_t>(p.m());
  return g;
}

Vector inner_value(const CompositionProblem& p, const Vector& x) {
  require_dim(x, p.dim_x(), "inner_value");
  Vector acc = Vector::Zero(p.dim_y());
  for (int j = 0; j < p.m(); ++j) acc += p.eval_g(j, x);
  return acc / static_cast<double>(p.m());
}

Matrix inner_jacobian(const CompositionProblem& p, const Vector& x, QueryCounter& qc) {
  const Matrix jac = inner_jacobian(p, x);
  qc.g_jacs += static_cast<std::uint64_t>(p.m());
  return jac;
}

Matrix inner_jacobian(const CompositionProblem& p, const Vector& x) {
  require_dim(x, p.dim_x(), "inner_jacobian");
  Matrix acc = Matrix::Zero(p.dim_y(), p.dim_x());
  for (int j = 0; j < p.m(); ++j) acc += p.jac_g(j, x);
  return acc / static_cast<double>(p.m());
}

Vector full_gradient(const CompositionProblem& p, const Vector& x, QueryCounter& qc) {
  const Vector g = full_gradient(p, x);
  qc.g_evals += static_cast<std::uint64_t>(p.m());
  qc.g_jacs += static_cast<std::uint64_t>(p.m());
  qc.f_grads += static_cast<std::uint64_t>(p.n());
  return g;
}

Vector full_gradient(const CompositionProblem& p, const Vector& x) {
  // Same arithmetic path as composing inner_value / inner_jacobian directly.
  const Vector gbar = inner_value(p, x);
  const Matrix jac = inner_jacobian(p, x);
  Vector fg = Vector::Zero(p.dim_y());
  for (int i = 0; i < p.n(); ++i) fg += p.grad_f(i, gbar);
  fg /= static_cast<double>(p.n());
  return jac.transpose() * fg + p.lambda() * x;
}

double objective(const CompositionProblem& p, const Vector& x, QueryCounter& qc) {
  const double v = objective(p, x);
  qc.g_evals += static_cast<std::uint64_t>(p.m());
  qc.f_evals += static_cast<std::uint64_t>(p.n());
  return v;
}

double objective(const CompositionProblem& p, const Vector& x) {
  require_dim(x, p.dim_x(), "objective");
  const Vector gbar = inner_value(p, x);
  double acc = 0.0;
  for (int i = 0; i < p.n(); ++i) acc += p.eval_f(i, gbar);
  return acc / static_cast<double>(p.n()) + 0.5 * p.lambda() * x.squaredNorm();
}

namespace {

double rel_err(double got, double want) {
  const double denom = std::max({std::abs(got), std::abs(want), 1.0});
  return std::abs(got - want) / denom;
}

}  // namespace

GradCheckReport check_gradients(const CompositionProblem& p,
                                const std::vector<Vector>& trial_points,
                                double tol) {
  if (tol <= 0.0) throw std::invalid_argument("check_gradients: tol must be > 0");
  GradCheckReport report;

  auto note = [&report](GradCheckEntry e, double tol_) {
    if (!e.finite || e.rel_error > tol_) report.passed = false;
    if (e.finite) report.max_rel_error = std::max(report.max_rel_error, e.rel_error);
    report.worst.push_back(std::move(e));
  };

  for (std::size_t pt = 0; pt < trial_points.size(); ++pt) {
    const Vector& x = trial_points[pt];
    const double h = 1e-6 * (1.0 + x.norm());

    for (int j = 0; j < p.m(); ++j) {
      const Matrix jac = p.jac_g(j, x);
      GradCheckEntry e;
      e.kind = "jac_g";
      e.index = j;
      e.point = static_cast<int>(pt);
      for (int c = 0; c < p.dim_x(); ++c) {
        Vector xp = x, xm = x;
        xp[c] += h;
        xm[c] -= h;
        const Vector fd = (p.eval_g(j, xp) - p.eval_g(j, xm)) / (2.0 * h);
        for (int r = 0; r < p.dim_y(); ++r) {
          if (!std::isfinite(fd[r]) || !std::isfinite(jac(r, c))) {
            e.finite = false;
            e.row = r;
            e.col = c;
            continue;
          }
          const double err = rel_err(jac(r, c), fd[r]);
          if (err > e.rel_error) {
            e.rel_error = err;
            e.row = r;
            e.col = c;
          }
        }
      }
      note(std::move(e), tol);
    }

    // grad_f is checked at y = G(x), the region the solvers visit.
    const Vector y = inner_value(p, x);
    const double hy = 1e-6 * (1.0 + y.norm());
    for (int i = 0; i < p.n(); ++i) {
      const Vector grad = p.grad_f(i, y);
      GradCheckEntry e;
      e.kind = "grad_f";
      e.index = i;
      e.point = static_cast<int>(pt);
      for (int c = 0; c < p.dim_y(); ++c) {
        Vector yp = y, ym = y;
        yp[c] += hy;
        ym[c] -= hy;
        const double fd = (p.eval_f(i, yp) - p.eval_f(i, ym)) / (2.0 * hy);
        if (!std::isfinite(fd) || !std::isfinite(grad[c])) {
          e.finite = false;
          e.col = c;
          continue;
        }
        const double err = rel_err(grad[c], fd);
        if (err > e.rel_error) {
          e.rel_error = err;
          e.col = c;
        }
      }
      note(std::move(e), tol);
    }
  }
  return report;
}

}  // namespace compopt
