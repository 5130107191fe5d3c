#include "compopt/algorithms.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "compopt/oracles.hpp"

namespace compopt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kDivergenceObjective = 1e12;

void validate_common(const RunConfig& cfg) {
  if (cfg.eta < 0.0) throw ConfigError("run: eta must be >= 0");
  if (cfg.epochs < 0 || cfg.inner_iters < 0)
    throw ConfigError("run: epochs and inner_iters must be >= 0");
  if (cfg.batch < 1) throw ConfigError("run: batch must be >= 1");
  if (cfg.record_every < 1) throw ConfigError("run: record_every must be >= 1");
}

void require_dual_ready(const CompositionProblem& p) {
  if (p.lambda() <= 0.0)
    throw ConfigError("SCDF methods require lambda > 0 (dual coupling)");
}

bool within_budget(const QueryCounter& qc, const RunConfig& cfg, std::uint64_t step_cost) {
  return !cfg.max_g_queries || qc.g_oracle() + step_cost <= *cfg.max_g_queries;
}

// Records trace rows at the configured cadence and checks divergence.
class Recorder {
 public:
  Recorder(Trace& trace, const CompositionProblem& p, const RunConfig& cfg)
      : trace_(trace), p_(p), cfg_(cfg), start_(std::chrono::steady_clock::now()) {}

  void record(long iter, const Vector& x, const QueryCounter& qc, double grad_est_sq) {
    const double obj = objective(p_, x);
    if (!std::isfinite(obj) || obj > kDivergenceObjective)
      throw DivergenceError("objective diverged at iteration " + std::to_string(iter), iter);
    TraceRow row;
    row.iter = iter;
    row.queries = qc.total();
    row.objective = obj;
    row.gap = cfg_.p_star ? obj - *cfg_.p_star : kNaN;
    row.grad_est_sq = grad_est_sq;
    row.ms = cfg_.timing
                 ? std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start_)
                       .count()
                 : 0.0;
    trace_.rows.push_back(row);
    last_recorded_ = iter;
  }

  void maybe(long iter, const Vector& x, const QueryCounter& qc, double grad_est_sq) {
    if (!x.allFinite())
      throw DivergenceError("non-finite iterate at iteration " + std::to_string(iter), iter);
    if (iter % cfg_.record_every == 0) record(iter, x, qc, grad_est_sq);
  }

  void finish(long iter, const Vector& x, const QueryCounter& qc, double grad_est_sq) {
    if (iter != last_recorded_) record(iter, x, qc, grad_est_sq);
  }

 private:
  Trace& trace_;
  const CompositionProblem& p_;
  const RunConfig& cfg_;
  std::chrono::steady_clock::time_point start_;
  long last_recorded_ = -1;
};

// Relative violation of lambda x = (1/n) sum_i beta_i.
double coupling_violation(const CompositionProblem& p, const Vector& x, const Matrix& beta) {
  const Vector mean_beta =
      beta.colwise().sum().transpose() / static_cast<double>(beta.rows());
  const Vector target = p.lambda() * x;
  const double denom = std::max(1.0, target.norm());
  return (target - mean_beta).norm() / denom;
}

Matrix initial_dual(const CompositionProblem& p, const Vector& x0) {
  return Vector::Ones(p.n()) * (p.lambda() * x0).transpose();
}

}  // namespace

Trace run_scdf(const CompositionProblem& p, const Vector& x0, const RunConfig& cfg) {
  validate_common(cfg);
  require_dual_ready(p);
  require_dim(x0, p.dim_x(), "run_scdf");

  const int n = p.n();
  const double eta = cfg.eta;
  const double lne = p.lambda() * static_cast<double>(n) * eta;
  const long total_iters = static_cast<long>(cfg.epochs) * cfg.inner_iters;
  const auto step_cost = 2 * static_cast<std::uint64_t>(p.m());

  Trace trace;
  QueryCounter qc;
  Vector x = x0;
  Matrix beta = initial_dual(p, x0);
  Xoshiro256 outer(cfg.seed, "scdf-outer");
  Recorder rec(trace, p, cfg);
  rec.maybe(0, x, qc, kNaN);

  long t = 0;
  double last_est_sq = kNaN;
  for (; t < total_iters; ++t) {
    if (!within_budget(qc, cfg, step_cost)) break;
    const Vector gbar = inner_value(p, x, qc);
    const Matrix jac = inner_jacobian(p, x, qc);
    const int i = static_cast<int>(outer.next_index(static_cast<std::size_t>(n)));
    const Vector fg = p.grad_f(i, gbar);
    ++qc.f_grads;
    const Vector step = jac.transpose() * fg + beta.row(i).transpose();
    last_est_sq = step.squaredNorm();
    beta.row(i) -= lne * step.transpose();
    x -= eta * step;
    rec.maybe(t + 1, x, qc, last_est_sq);
    if ((t + 1) % cfg.record_every == 0)
      trace.max_coupling_violation =
          std::max(trace.max_coupling_violation, coupling_violation(p, x, beta));
  }
  rec.finish(t, x, qc, last_est_sq);
  trace.max_coupling_violation =
      std::max(trace.max_coupling_violation, coupling_violation(p, x, beta));
  trace.counter = qc;
  trace.x_final = x;
  return trace;
}

Trace run_scdf_svrg(const CompositionProblem& p, const Vector& x0, const RunConfig& cfg) {
  validate_common(cfg);
  require_dual_ready(p);
  require_dim(x0, p.dim_x(), "run_scdf_svrg");
  if (cfg.inner_iters < 1 && cfg.epochs > 0)
    throw ConfigError("run_scdf_svrg: inner_iters must be >= 1");

  const int n = p.n();
  const int A = cfg.batch;
  const double eta = cfg.eta;
  const double lne = p.lambda() * static_cast<double>(n) * eta;
  const auto snapshot_cost = 2 * static_cast<std::uint64_t>(p.m());
  const auto inner_cost = 4 * static_cast<std::uint64_t>(A);

  Trace trace;
  QueryCounter qc;
  Vector x_tilde = x0;
  Matrix beta = initial_dual(p, x0);
  Xoshiro256 batch_rng(cfg.seed, "svrg-batch");
  Xoshiro256 outer(cfg.seed, "svrg-outer");
  Recorder rec(trace, p, cfg);
  rec.maybe(0, x_tilde, qc, kNaN);

  Vector x = x_tilde;
  long iter = 0;
  double last_est_sq = kNaN;
  bool budget_hit = false;
  for (int s = 0; s < cfg.epochs && !budget_hit; ++s) {
    if (!within_budget(qc, cfg, snapshot_cost)) break;
    const SvrgSnapshot snap = make_svrg_snapshot(p, x_tilde, s, qc);
    x = x_tilde;
    Vector sum_x = Vector::Zero(p.dim_x());
    Matrix sum_beta = Matrix::Zero(n, p.dim_x());
    int k_done = 0;
    for (int k = 0; k < cfg.inner_iters; ++k) {
      if (!within_budget(qc, cfg, inner_cost)) {
        budget_hit = true;
        break;
      }
      const MiniBatch batch = sample_minibatch(batch_rng, p.m(), A);
      const InnerEstimate est = svrg_estimate(snap, p, x, batch, qc);
      const int i = static_cast<int>(outer.next_index(static_cast<std::size_t>(n)));
      const Vector fg = p.grad_f(i, est.g_hat);
      ++qc.f_grads;
      const Vector step = est.jac_hat.transpose() * fg + beta.row(i).transpose();
      last_est_sq = step.squaredNorm();
      beta.row(i) -= lne * step.transpose();
      x -= eta * step;
      sum_x += x;
      sum_beta += beta;
      ++k_done;
      ++iter;
      rec.maybe(iter, x, qc, last_est_sq);
      if (iter % cfg.record_every == 0)
        trace.max_coupling_violation =
            std::max(trace.max_coupling_violation, coupling_violation(p, x, beta));
    }
    if (k_done == cfg.inner_iters) {
      x_tilde = sum_x / static_cast<double>(k_done);
      beta = sum_beta / static_cast<double>(k_done);
      x = x_tilde;
    }
  }
  rec.finish(iter, x, qc, last_est_sq);
  trace.max_coupling_violation =
      std::max(trace.max_coupling_violation, coupling_violation(p, x, beta));
  trace.counter = qc;
  trace.x_final = x;
  return trace;
}

Trace run_scdf_saga(const CompositionProblem& p, const Vector& x0, const RunConfig& cfg) {
  validate_common(cfg);
  require_dual_ready(p);
  require_dim(x0, p.dim_x(), "run_scdf_saga");

  const int n = p.n();
  const int A = cfg.batch;
  const double eta = cfg.eta;
  const double lne = p.lambda() * static_cast<double>(n) * eta;
  const long total_iters = static_cast<long>(cfg.epochs) * cfg.inner_iters;
  const auto init_cost = 2 * static_cast<std::uint64_t>(p.m());
  const auto step_cost = 2 * static_cast<std::uint64_t>(A);

  Trace trace;
  QueryCounter qc;
  Vector x = x0;
  Matrix beta = initial_dual(p, x0);
  Xoshiro256 batch_rng(cfg.seed, "saga-batch");
  Xoshiro256 outer(cfg.seed, "saga-outer");
  Recorder rec(trace, p, cfg);

  if (!within_budget(qc, cfg, init_cost)) {
    rec.maybe(0, x, qc, kNaN);
    trace.counter = qc;
    trace.x_final = x;
    return trace;
  }
  SagaTable table(p, x0, qc);
  rec.maybe(0, x, qc, kNaN);

  long k = 0;
  double last_est_sq = kNaN;
  SagaBatchEvals evals;
  for (; k < total_iters; ++k) {
    if (!within_budget(qc, cfg, step_cost)) break;
    const MiniBatch batch = sample_minibatch(batch_rng, p.m(), A);
    const InnerEstimate est = saga_estimate(table, p, x, batch, qc, &evals);
    saga_update_table(table, x, batch, evals);
    const int i = static_cast<int>(outer.next_index(static_cast<std::size_t>(n)));
    const Vector fg = p.grad_f(i, est.g_hat);
    ++qc.f_grads;
    const Vector step = est.jac_hat.transpose() * fg + beta.row(i).transpose();
    last_est_sq = step.squaredNorm();
    beta.row(i) -= lne * step.transpose();
    x -= eta * step;
    rec.maybe(k + 1, x, qc, last_est_sq);
    if ((k + 1) % cfg.record_every == 0)
      trace.max_coupling_violation =
          std::max(trace.max_coupling_violation, coupling_violation(p, x, beta));
  }
  rec.finish(k, x, qc, last_est_sq);
  trace.max_coupling_violation =
      std::max(trace.max_coupling_violation, coupling_violation(p, x, beta));
  trace.counter = qc;
  trace.x_final = x;
  return trace;
}

Trace run_sgd(const CompositionProblem& p, const Vector& x0, const RunConfig& cfg,
              SgdInnerMode mode) {
  validate_common(cfg);
  require_dim(x0, p.dim_x(), "run_sgd");

  const double eta = cfg.eta;
  const long total_iters = static_cast<long>(cfg.epochs) * cfg.inner_iters;
  const auto step_cost = mode == SgdInnerMode::kSingleSample
                             ? std::uint64_t{2}
                             : 2 * static_cast<std::uint64_t>(p.m());

  Trace trace;
  QueryCounter qc;
  Vector x = x0;
  Xoshiro256 inner(cfg.seed, "sgd-inner");
  Xoshiro256 outer(cfg.seed, "sgd-outer");
  Recorder rec(trace, p, cfg);
  rec.maybe(0, x, qc, kNaN);

  long t = 0;
  double last_est_sq = kNaN;
  for (; t < total_iters; ++t) {
    if (!within_budget(qc, cfg, step_cost)) break;
    Vector g;
    Matrix jac;
    if (mode == SgdInnerMode::kSingleSample) {
      const int j = static_cast<int>(inner.next_index(static_cast<std::size_t>(p.m())));
      g = p.eval_g(j, x);
      jac = p.jac_g(j, x);
      ++qc.g_evals;
      ++qc.g_jacs;
    } else {
      g = inner_value(p, x, qc);
      jac = inner_jacobian(p, x, qc);
    }
    const int i = static_cast<int>(outer.next_index(static_cast<std::size_t>(p.n())));
    const Vector fg = p.grad_f(i, g);
    ++qc.f_grads;
    const Vector step = jac.transpose() * fg + p.lambda() * x;
    last_est_sq = step.squaredNorm();
    x -= eta * step;
    rec.maybe(t + 1, x, qc, last_est_sq);
  }
  rec.finish(t, x, qc, last_est_sq);
  trace.counter = qc;
  trace.x_final = x;
  return trace;
}

Trace run_scgd(const CompositionProblem& p, const Vector& x0, const RunConfig& cfg,
               const ScgdSchedule& schedule) {
  validate_common(cfg);
  require_dim(x0, p.dim_x(), "run_scgd");
  if (schedule.kind == ScgdSchedule::kConstant) {
    if (schedule.beta <= 0.0 || schedule.beta > 1.0)
      throw ConfigError("run_scgd: constant beta must be in (0, 1]");
  } else {
    if (schedule.beta <= 0.0 || schedule.beta > 1.0)
      throw ConfigError("run_scgd: polynomial b must be in (0, 1] (beta_1 = b)");
  }

  const long total_iters = static_cast<long>(cfg.epochs) * cfg.inner_iters;

  Trace trace;
  QueryCounter qc;
  Vector x = x0;
  Xoshiro256 inner(cfg.seed, "scgd-inner");
  Xoshiro256 outer(cfg.seed, "scgd-outer");
  Recorder rec(trace, p, cfg);

  if (!within_budget(qc, cfg, 1)) {
    rec.maybe(0, x, qc, kNaN);
    trace.counter = qc;
    trace.x_final = x;
    return trace;
  }
  const int j0 = static_cast<int>(inner.next_index(static_cast<std::size_t>(p.m())));
  Vector y = p.eval_g(j0, x);
  ++qc.g_evals;
  rec.maybe(0, x, qc, kNaN);

  long t = 0;
  double last_est_sq = kNaN;
  for (; t < total_iters; ++t) {
    if (!within_budget(qc, cfg, 2)) break;
    const long k = t + 1;
    double alpha_k = schedule.alpha;
    double beta_k = schedule.beta;
    if (schedule.kind == ScgdSchedule::kPolynomial) {
      alpha_k = schedule.alpha * std::pow(static_cast<double>(k), -0.75);
      beta_k = schedule.beta * std::pow(static_cast<double>(k), -0.5);
    }
    const int j = static_cast<int>(inner.next_index(static_cast<std::size_t>(p.m())));
    const Vector gj = p.eval_g(j, x);
    ++qc.g_evals;
    y = (1.0 - beta_k) * y + beta_k * gj;
    const Matrix jac = p.jac_g(j, x);
    ++qc.g_jacs;
    const int i = static_cast<int>(outer.next_index(static_cast<std::size_t>(p.n())));
    const Vector fg = p.grad_f(i, y);
    ++qc.f_grads;
    const Vector step = jac.transpose() * fg + p.lambda() * x;
    last_est_sq = step.squaredNorm();
    x -= alpha_k * step;
    rec.maybe(t + 1, x, qc, last_est_sq);
  }
  rec.finish(t, x, qc, last_est_sq);
  trace.counter = qc;
  trace.x_final = x;
  return trace;
}

Trace run_compositional_svrg(const CompositionProblem& p, const Vector& x0,
                             const RunConfig& cfg) {
  validate_common(cfg);
  require_dim(x0, p.dim_x(), "run_compositional_svrg");
  if (cfg.inner_iters < 1 && cfg.epochs > 0)
    throw ConfigError("run_compositional_svrg: inner_iters must be >= 1");

  const int n = p.n();
  const int A = cfg.batch;
  const double eta = cfg.eta;
  const auto snapshot_cost = 2 * static_cast<std::uint64_t>(p.m());
  const auto inner_cost = 4 * static_cast<std::uint64_t>(A);

  Trace trace;
  QueryCounter qc;
  Vector x_tilde = x0;
  Xoshiro256 batch_rng(cfg.seed, "csvrg-batch");
  Xoshiro256 outer(cfg.seed, "csvrg-outer");
  Recorder rec(trace, p, cfg);
  rec.maybe(0, x_tilde, qc, kNaN);

  Vector x = x_tilde;
  long iter = 0;
  double last_est_sq = kNaN;
  bool budget_hit = false;
  for (int s = 0; s < cfg.epochs && !budget_hit; ++s) {
    if (!within_budget(qc, cfg, snapshot_cost)) break;
    const SvrgSnapshot snap = make_svrg_snapshot(p, x_tilde, s, qc);
    Vector fg_full = Vector::Zero(p.dim_y());
    for (int i = 0; i < n; ++i) fg_full += p.grad_f(i, snap.g_tilde);
    fg_full /= static_cast<double>(n);
    qc.f_grads += static_cast<std::uint64_t>(n);
    const Vector grad_tilde = snap.jac_tilde.transpose() * fg_full;

    x = x_tilde;
    Vector sum_x = Vector::Zero(p.dim_x());
    int k_done = 0;
    for (int k = 0; k < cfg.inner_iters; ++k) {
      if (!within_budget(qc, cfg, inner_cost)) {
        budget_hit = true;
        break;
      }
      const MiniBatch batch = sample_minibatch(batch_rng, p.m(), A);
      const InnerEstimate est = svrg_estimate(snap, p, x, batch, qc);
      const int i = static_cast<int>(outer.next_index(static_cast<std::size_t>(n)));
      const Vector fg_hat = p.grad_f(i, est.g_hat);
      const Vector fg_snap = p.grad_f(i, snap.g_tilde);
      qc.f_grads += 2;
      const Vector step = est.jac_hat.transpose() * fg_hat -
                          snap.jac_tilde.transpose() * fg_snap + grad_tilde +
                          p.lambda() * x;
      last_est_sq = step.squaredNorm();
      x -= eta * step;
      sum_x += x;
      ++k_done;
      ++iter;
      rec.maybe(iter, x, qc, last_est_sq);
    }
    if (k_done == cfg.inner_iters) {
      x_tilde = sum_x / static_cast<double>(k_done);
      x = x_tilde;
    }
  }
  rec.finish(iter, x, qc, last_est_sq);
  trace.counter = qc;
  trace.x_final = x;
  return trace;
}

std::vector<double> gradient_estimate_norm_monitor(const Trace& trace) {
  std::vector<double> series;
  series.reserve(trace.rows.size());
  for (const auto& row : trace.rows)
    if (std::isfinite(row.grad_est_sq)) series.push_back(row.grad_est_sq);
  return series;
}

}  // namespace compopt
