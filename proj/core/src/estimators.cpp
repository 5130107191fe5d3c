#include "compopt/estimators.hpp"

#include "compopt/oracles.hpp"

namespace compopt {

MiniBatch sample_minibatch(Xoshiro256& rng, int m, int A) {
  if (m < 1 || A < 1) throw ConfigError("sample_minibatch: m and A must be >= 1");
  MiniBatch batch;
  batch.indices.reserve(static_cast<std::size_t>(A));
  for (int k = 0; k < A; ++k)
    batch.indices.push_back(static_cast<int>(rng.next_index(static_cast<std::size_t>(m))));
  return batch;
}

SvrgSnapshot make_svrg_snapshot(const CompositionProblem& p, const Vector& x_tilde,
                                int epoch, QueryCounter& qc) {
  SvrgSnapshot snap;
  snap.x_tilde = x_tilde;
  snap.g_tilde = inner_value(p, x_tilde, qc);
  snap.jac_tilde = inner_jacobian(p, x_tilde, qc);
  snap.epoch = epoch;
  return snap;
}

InnerEstimate svrg_estimate(const SvrgSnapshot& snap, const CompositionProblem& p,
                            const Vector& x, const MiniBatch& batch,
                            QueryCounter& qc) {
  require_dim(x, p.dim_x(), "svrg_estimate");
  const double inv_a = 1.0 / static_cast<double>(batch.size());
  Vector g_hat = snap.g_tilde;
  Matrix jac_hat = snap.jac_tilde;
  for (int j : batch.indices) {
    if (j < 0 || j >= p.m()) throw DimensionError("svrg_estimate: batch index out of range");
    g_hat += inv_a * (p.eval_g(j, x) - p.eval_g(j, snap.x_tilde));
    jac_hat += inv_a * (p.jac_g(j, x) - p.jac_g(j, snap.x_tilde));
  }
  qc.g_evals += 2 * static_cast<std::uint64_t>(batch.size());
  qc.g_jacs += 2 * static_cast<std::uint64_t>(batch.size());
  return {std::move(g_hat), std::move(jac_hat)};
}

SagaTable::SagaTable(const CompositionProblem& p, const Vector& x0, QueryCounter& qc) {
  require_dim(x0, p.dim_x(), "SagaTable");
  const int m = p.m();
  phi_.assign(static_cast<std::size_t>(m), x0);
  g_cache_.reserve(static_cast<std::size_t>(m));
  jac_cache_.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    g_cache_.push_back(p.eval_g(j, x0));
    jac_cache_.push_back(p.jac_g(j, x0));
  }
  qc.g_evals += static_cast<std::uint64_t>(m);
  qc.g_jacs += static_cast<std::uint64_t>(m);
  rebuild_averages();
}

void SagaTable::rebuild_averages() {
  g_avg_ = Vector::Zero(g_cache_[0].size());
  jac_avg_ = Matrix::Zero(jac_cache_[0].rows(), jac_cache_[0].cols());
  for (std::size_t j = 0; j < g_cache_.size(); ++j) {
    g_avg_ += g_cache_[j];
    jac_avg_ += jac_cache_[j];
  }
  g_avg_ /= static_cast<double>(g_cache_.size());
  jac_avg_ /= static_cast<double>(jac_cache_.size());
  updates_since_rebuild_ = 0;
}

InnerEstimate saga_estimate(const SagaTable& table, const CompositionProblem& p,
                            const Vector& x, const MiniBatch& batch,
                            QueryCounter& qc, SagaBatchEvals* evals_out) {
  require_dim(x, p.dim_x(), "saga_estimate");
  const double inv_a = 1.0 / static_cast<double>(batch.size());
  Vector g_hat = table.g_avg();
  Matrix jac_hat = table.jac_avg();
  if (evals_out) {
    evals_out->g.clear();
    evals_out->jac.clear();
    evals_out->g.reserve(batch.indices.size());
    evals_out->jac.reserve(batch.indices.size());
  }
  for (int j : batch.indices) {
    if (j < 0 || j >= table.size()) throw DimensionError("saga_estimate: batch index out of range");
    Vector gj = p.eval_g(j, x);
    Matrix jj = p.jac_g(j, x);
    g_hat += inv_a * (gj - table.g_cache(j));
    jac_hat += inv_a * (jj - table.jac_cache(j));
    if (evals_out) {
      evals_out->g.push_back(std::move(gj));
      evals_out->jac.push_back(std::move(jj));
    }
  }
  qc.g_evals += static_cast<std::uint64_t>(batch.size());
  qc.g_jacs += static_cast<std::uint64_t>(batch.size());
  return {std::move(g_hat), std::move(jac_hat)};
}

void saga_update_table(SagaTable& table, const Vector& x, const MiniBatch& batch,
                       const SagaBatchEvals& evals) {
  if (evals.g.size() != batch.indices.size() || evals.jac.size() != batch.indices.size())
    throw DimensionError("saga_update_table: evals do not match batch");
  const double inv_m = 1.0 / static_cast<double>(table.size());
  for (std::size_t k = 0; k < batch.indices.size(); ++k) {
    const auto j = static_cast<std::size_t>(batch.indices[k]);
    // Later duplicates see the already-updated cache; their delta is zero.
    table.g_avg_ += inv_m * (evals.g[k] - table.g_cache_[j]);
    table.jac_avg_ += inv_m * (evals.jac[k] - table.jac_cache_[j]);
    table.phi_[j] = x;
    table.g_cache_[j] = evals.g[k];
    table.jac_cache_[j] = evals.jac[k];
    ++table.updates_since_rebuild_;
  }
  if (table.updates_since_rebuild_ >= 100000) table.rebuild_averages();
}

}  // namespace compopt
