#include "compopt/theory.hpp"

#include <cmath>
#include <limits>

#include "compopt/oracles.hpp"
#include "compopt/rng.hpp"

namespace compopt {

namespace {

// Largest singular value by power iteration on A^T A, 50 iterations.
double spectral_norm(const Matrix& a, Xoshiro256& rng) {
  Vector v(a.cols());
  for (int k = 0; k < v.size(); ++k) v[k] = rng.next_normal();
  double nrm = v.norm();
  if (nrm == 0.0) return 0.0;
  v /= nrm;
  for (int it = 0; it < 50; ++it) {
    Vector w = a.transpose() * (a * v);
    nrm = w.norm();
    if (nrm == 0.0) return 0.0;
    v = w / nrm;
  }
  return (a * v).norm();
}

// Per-component composition gradient h_i(x) = (dG(x))^T grad F_i(G(x)).
Vector component_gradient(const CompositionProblem& p, int i, const Vector& g,
                          const Matrix& jac) {
  return jac.transpose() * p.grad_f(i, g);
}

double unregularized_value(const CompositionProblem& p, const Vector& x) {
  const Vector g = inner_value(p, x);
  double acc = 0.0;
  for (int i = 0; i < p.n(); ++i) acc += p.eval_f(i, g);
  return acc / static_cast<double>(p.n());
}

}  // namespace

ProblemConstants estimate_constants(const CompositionProblem& p,
                                    const std::vector<Vector>& sample_points,
                                    int pairs, std::uint64_t seed) {
  if (sample_points.size() < 2)
    throw ConfigError("estimate_constants: need at least 2 sample points");
  Xoshiro256 rng(seed, "constants");

  ProblemConstants c;

  struct PointData {
    Vector g;
    Matrix jac;
  };
  std::vector<PointData> data;
  data.reserve(sample_points.size());
  for (const auto& x : sample_points)
    data.push_back({inner_value(p, x), inner_jacobian(p, x)});

  for (std::size_t s = 0; s < sample_points.size(); ++s) {
    const Vector& x = sample_points[s];
    for (int i = 0; i < p.n(); ++i)
      c.B_F = std::max(c.B_F, p.grad_f(i, data[s].g).norm());
    for (int j = 0; j < p.m(); ++j)
      c.B_G = std::max(c.B_G, spectral_norm(p.jac_g(j, x), rng));
  }

  for (int pair = 0; pair < pairs; ++pair) {
    const auto a = rng.next_index(sample_points.size());
    auto b = rng.next_index(sample_points.size());
    if (a == b) continue;  // coincident pair carries no ratio
    const Vector& xa = sample_points[a];
    const Vector& xb = sample_points[b];
    const double dx = (xa - xb).norm();
    if (dx == 0.0) continue;

    const Vector& ga = data[a].g;
    const Vector& gb = data[b].g;
    const double dy = (ga - gb).norm();
    if (dy > 0.0)
      for (int i = 0; i < p.n(); ++i)
        c.L_F = std::max(c.L_F, (p.grad_f(i, ga) - p.grad_f(i, gb)).norm() / dy);

    for (int j = 0; j < p.m(); ++j)
      c.L_G = std::max(c.L_G, spectral_norm(p.jac_g(j, xa) - p.jac_g(j, xb), rng) / dx);

    // L_f from the smoothness inequality of the composition: the squared
    // gradient difference over twice the Bregman gap.
    for (int i = 0; i < p.n(); ++i) {
      const Vector ha = component_gradient(p, i, ga, data[a].jac);
      const Vector hb = component_gradient(p, i, gb, data[b].jac);
      const double bregman = p.eval_f(i, ga) - p.eval_f(i, gb) - hb.dot(xa - xb);
      if (bregman > 1e-14)
        c.L_f = std::max(c.L_f, (ha - hb).squaredNorm() / (2.0 * bregman));
    }
  }

  // Level-set sweep for R_x: farthest points with F(G(x)) <= F(G(x0)) along
  // random rays from x0, measured against x*.
  const auto opt = p.compute_optimum();
  if (opt && p.lambda() > 0.0) {
    const Vector& x0 = sample_points[0];
    const double f0 = unregularized_value(p, x0);
    double max_dist_sq = (opt->x_star - x0).squaredNorm();
    const int dirs = 16;
    for (int dcount = 0; dcount < dirs; ++dcount) {
      Vector dir(p.dim_x());
      for (int k = 0; k < dir.size(); ++k) dir[k] = rng.next_normal();
      const double dn = dir.norm();
      if (dn == 0.0) continue;
      dir /= dn;
      double t_in = 0.0, t_out = 1.0;
      int doublings = 0;
      while (unregularized_value(p, x0 + t_out * dir) <= f0 && doublings < 60) {
        t_in = t_out;
        t_out *= 2.0;
        ++doublings;
      }
      if (doublings >= 60) continue;  // unbounded ray; skip
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (t_in + t_out);
        if (unregularized_value(p, x0 + mid * dir) <= f0)
          t_in = mid;
        else
          t_out = mid;
      }
      max_dist_sq = std::max(max_dist_sq,
                             (opt->x_star - (x0 + t_in * dir)).squaredNorm());
    }
    c.R_x = max_dist_sq / p.lambda();
  }
  return c;
}

SvrgBound svrg_step_bound(const ProblemConstants& c, double lambda, int n, int A,
                          bool convex_outer, std::optional<double> d) {
  if (lambda <= 0.0) throw ConfigError("svrg_step_bound: lambda must be > 0");
  if (A < 1) throw ConfigError("svrg_step_bound: A must be >= 1");
  const double bg4lf2 = std::pow(c.B_G, 4) * c.L_F * c.L_F;
  const double bf2lg2 = c.B_F * c.B_F * c.L_G * c.L_G;
  const double inv_a = 1.0 / static_cast<double>(A);
  const double nn = static_cast<double>(n);

  SvrgBound out;
  if (!convex_outer) {
    out.q = bg4lf2 > 0.0 ? A * lambda / (4.0 * bg4lf2)
                         : std::numeric_limits<double>::infinity();
    const double num = 0.5 * lambda * lambda - 4.0 * bg4lf2 * inv_a;
    const double den = 2.0 * (4.0 * bf2lg2 * inv_a + 4.0 * bg4lf2 * inv_a) * lambda +
                       0.5 * lambda * lambda * lambda * nn -
                       4.0 * lambda * bg4lf2 * inv_a * nn;
    if (num <= 0.0 || den <= 0.0) {
      out.vacuous = true;
      return out;
    }
    const double eta = num / den;
    out.eta_max = eta;
    const double lo_den = lambda - 1.0 / out.q - 2.0 * out.q * bg4lf2 * inv_a;
    out.ab_lo = lo_den > 0.0 ? 2.0 * lambda * (4.0 * bf2lg2 * inv_a + 4.0 * bg4lf2 * inv_a) / lo_den
                             : std::numeric_limits<double>::infinity();
    out.ab_hi = (1.0 - nn * lambda * eta) * lambda / eta;
    const double a = 0.5 * (out.ab_lo + out.ab_hi), b = 1.0;
    out.d2_or_e2 =
        2.0 * (a * eta * out.q * bg4lf2 * inv_a +
               b * lambda * eta * (4.0 * bf2lg2 * inv_a + 4.0 * bg4lf2 * inv_a)) +
        b * lambda * eta * (4.0 * bf2lg2 + 4.0 * bg4lf2);
    return out;
  }

  if (!d || *d <= 0.0 || *d >= 1.0)
    throw ConfigError("svrg_step_bound: convex branch needs d in (0, 1)");
  const double dd = *d;
  out.batch_ok = static_cast<double>(A) >= 2.0 * c.R_x * bg4lf2 / dd;
  const double den = 2.0 * c.L_f + lambda * nn * (1.0 - dd);
  if (den <= 0.0) {
    out.vacuous = true;
    return out;
  }
  const double eta = (1.0 - dd) / den;
  out.eta_max = eta;
  const double lo_den = dd - 2.0 * c.R_x * bg4lf2 * inv_a;
  out.ab_lo = lo_den > 0.0
                  ? (2.0 * (2.0 * bf2lg2 + bg4lf2) * inv_a - c.L_f * lambda) / lo_den
                  : std::numeric_limits<double>::infinity();
  out.ab_hi = (1.0 - nn * lambda * eta) * lambda / eta;
  const double a = 0.5 * (out.ab_lo + out.ab_hi), b = 1.0;
  out.d2_or_e2 = 2.0 * a * eta * lambda * c.R_x * bg4lf2 * inv_a +
                 4.0 * b * lambda * eta * (bf2lg2 + bg4lf2) * inv_a;
  return out;
}

namespace {

// Theorem-3 step bound right-hand side at (eta, A).
double saga_eta_rhs(double lambda, double nn, double A, double eta, double Y1,
                    double Y2, double Y3) {
  const double denom_a = A - lambda * eta * nn;
  if (denom_a <= 0.0) return -1.0;
  const double ratio = A / denom_a;
  const double den = 2.0 * Y2 + ratio * 2.0 * Y3 +
                     lambda * lambda * nn * (1.0 - 8.0 * (1.0 + ratio) * Y1);
  if (den <= 0.0) return -1.0;
  return lambda / den;
}

}  // namespace

SagaBound saga_bounds(const ProblemConstants& c, double lambda, int n,
                      std::optional<int> A, std::optional<double> eta,
                      bool convex_outer, std::optional<double> d) {
  if (lambda <= 0.0) throw ConfigError("saga_bounds: lambda must be > 0");
  if (A.has_value() == eta.has_value())
    throw ConfigError("saga_bounds: exactly one of (A, eta) must be given");
  const double bg4lf2 = std::pow(c.B_G, 4) * c.L_F * c.L_F;
  const double bf2lg2 = c.B_F * c.B_F * c.L_G * c.L_G;
  const double nn = static_cast<double>(n);

  SagaBound out;
  if (!convex_outer) {
    auto a_min_at = [&](double eta_v) {
      const double base = 16.0 * c.R_x * (bf2lg2 + bg4lf2);
      return 0.5 * (lambda * eta_v * nn + base) +
             0.5 * std::sqrt(lambda * lambda * eta_v * eta_v * nn * nn + base * base);
    };
    if (eta) {
      out.A_min = a_min_at(*eta);
      const double Av = out.A_min;
      out.Y1 = c.R_x * (bf2lg2 + bg4lf2) / Av;
      out.Y2 = bf2lg2 / Av + bg4lf2;
      out.Y3 = bf2lg2 / Av;
      // Report the step bound at A = A_min by fixed-point iteration.
      double e = std::min(*eta, 0.5 / (lambda * nn));
      bool converged = false;
      for (int it = 0; it < 1000; ++it) {
        const double next = saga_eta_rhs(lambda, nn, Av, e, out.Y1, out.Y2, out.Y3);
        if (next <= 0.0) break;
        if (std::abs(next - e) <= 1e-12) {
          e = next;
          converged = true;
          break;
        }
        e = next;
      }
      if (converged) {
        out.eta_max = e;
        out.feasible = *eta <= e;
      } else {
        out.feasible = false;
      }
    } else {
      const double Av = static_cast<double>(*A);
      out.Y1 = c.R_x * (bf2lg2 + bg4lf2) / Av;
      out.Y2 = bf2lg2 / Av + bg4lf2;
      out.Y3 = bf2lg2 / Av;
      double e = 0.5 / (lambda * nn);
      bool converged = false;
      for (int it = 0; it < 1000; ++it) {
        const double next = saga_eta_rhs(lambda, nn, Av, e, out.Y1, out.Y2, out.Y3);
        if (next <= 0.0) break;
        if (std::abs(next - e) <= 1e-12) {
          e = next;
          converged = true;
          break;
        }
        e = next;
      }
      if (!converged) {
        out.feasible = false;
        return out;
      }
      out.eta_max = e;
      out.A_min = a_min_at(e);
      out.feasible = Av >= out.A_min;
    }
    return out;
  }

  if (!d || *d <= 0.0 || *d >= 1.0)
    throw ConfigError("saga_bounds: convex branch needs d in (0, 1)");
  const double dd = *d;
  const double eta_bound = 1.0 / (2.0 * c.L_f * lambda / (1.0 - dd) + lambda * nn);
  out.eta_max = eta_bound;
  const double eta_used = eta ? *eta : eta_bound;
  out.A_min = (2.0 + std::sqrt(2.0)) *
              (lambda * eta_used * nn + 16.0 * c.R_x * (bf2lg2 + bg4lf2) / dd);
  const double a_used = A ? static_cast<double>(*A) : out.A_min;
  out.Y = (bf2lg2 + bg4lf2) / std::max(a_used, 1.0);
  out.feasible = (!eta || *eta <= eta_bound) && (!A || static_cast<double>(*A) >= out.A_min);
  return out;
}

ContractionResult svrg_contraction_factor(const ProblemConstants& c, double lambda,
                                          int n, int K, int A, double eta,
                                          bool convex_outer, std::optional<double> d) {
  if (lambda <= 0.0 || eta <= 0.0 || K < 1 || A < 1)
    throw ConfigError("svrg_contraction_factor: invalid parameters");
  const double bg4lf2 = std::pow(c.B_G, 4) * c.L_F * c.L_F;
  const double bf2lg2 = c.B_F * c.B_F * c.L_G * c.L_G;
  const double inv_a = 1.0 / static_cast<double>(A);
  const double nn = static_cast<double>(n);

  ContractionResult out;
  double ab_lo = 0.0;
  const double ab_hi = (1.0 - nn * lambda * eta) * lambda / eta;
  double coeff = 0.0;  // d2 or e2 with b = 1, evaluated after a is chosen
  if (!convex_outer) {
    const double q = bg4lf2 > 0.0 ? A * lambda / (4.0 * bg4lf2)
                                  : std::numeric_limits<double>::infinity();
    const double lo_den = lambda - 1.0 / q - 2.0 * q * bg4lf2 * inv_a;
    ab_lo = lo_den > 0.0
                ? 2.0 * lambda * (4.0 * bf2lg2 * inv_a + 4.0 * bg4lf2 * inv_a) / lo_den
                : std::numeric_limits<double>::infinity();
    if (!(ab_lo <= ab_hi)) {
      out.feasible = false;
      return out;
    }
    const double a = 0.5 * (ab_lo + ab_hi);
    out.a_over_b = a;
    coeff = 2.0 * (a * eta * q * bg4lf2 * inv_a +
                   lambda * eta * (4.0 * bf2lg2 * inv_a + 4.0 * bg4lf2 * inv_a)) +
            lambda * eta * (4.0 * bf2lg2 + 4.0 * bg4lf2);
  } else {
    if (!d || *d <= 0.0 || *d >= 1.0)
      throw ConfigError("svrg_contraction_factor: convex branch needs d in (0, 1)");
    const double dd = *d;
    const double lo_den = dd - 2.0 * c.R_x * bg4lf2 * inv_a;
    ab_lo = lo_den > 0.0
                ? (2.0 * (2.0 * bf2lg2 + bg4lf2) * inv_a - c.L_f * lambda) / lo_den
                : std::numeric_limits<double>::infinity();
    if (!(ab_lo <= ab_hi)) {
      out.feasible = false;
      return out;
    }
    const double a = 0.5 * (ab_lo + ab_hi);
    out.a_over_b = a;
    coeff = 2.0 * a * eta * lambda * c.R_x * bg4lf2 * inv_a +
            4.0 * lambda * eta * (bf2lg2 + bg4lf2) * inv_a;
  }
  const double factor = 1.0 / (eta * lambda * static_cast<double>(K)) +
                        coeff / (out.a_over_b * eta * lambda);
  out.factor = factor;
  out.contractive = factor < 1.0;
  return out;
}

}  // namespace compopt
