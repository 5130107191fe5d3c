#pragma once

#include <vector>

#include "compopt/problem.hpp"
#include "compopt/rng.hpp"

namespace compopt {

// A indices drawn i.i.d. uniformly from [0, m) WITH replacement.
struct MiniBatch {
  std::vector<int> indices;
  int size() const { return static_cast<int>(indices.size()); }
};

MiniBatch sample_minibatch(Xoshiro256& rng, int m, int A);

struct InnerEstimate {
  Vector g_hat;
  Matrix jac_hat;
};

// Frozen epoch reference point with exact full inner averages.
struct SvrgSnapshot {
  Vector x_tilde;
  Vector g_tilde;
  Matrix jac_tilde;
  int epoch = 0;
};

// Computes G(x~) and dG(x~) exactly; meters m g_evals + m g_jacs.
SvrgSnapshot make_svrg_snapshot(const CompositionProblem& p, const Vector& x_tilde,
                                int epoch, QueryCounter& qc);

// Control-variate estimate anchored at the snapshot:
//   Ghat = (1/A) sum_{j in batch} (G_j(x) - G_j(x~)) + G(x~),
// same shape for the Jacobian. Meters 2A g_evals + 2A g_jacs.
InnerEstimate svrg_estimate(const SvrgSnapshot& snap, const CompositionProblem& p,
                            const Vector& x, const MiniBatch& batch,
                            QueryCounter& qc);

struct SagaBatchEvals;

// Per-index stored points with incrementally maintained averages.
class SagaTable {
 public:
  // phi_j = x0 for all j; fills caches, meters m g_evals + m g_jacs.
  SagaTable(const CompositionProblem& p, const Vector& x0, QueryCounter& qc);

  const Vector& g_avg() const { return g_avg_; }
  const Matrix& jac_avg() const { return jac_avg_; }
  const Vector& phi(int j) const { return phi_[static_cast<std::size_t>(j)]; }
  const Vector& g_cache(int j) const { return g_cache_[static_cast<std::size_t>(j)]; }
  const Matrix& jac_cache(int j) const { return jac_cache_[static_cast<std::size_t>(j)]; }
  int size() const { return static_cast<int>(phi_.size()); }

  // Recompute the averages from the caches; used to bound floating drift
  // (applied automatically every 1e5 updates) and by coherence tests.
  void rebuild_averages();

  friend void saga_update_table(SagaTable&, const Vector&, const MiniBatch&,
                                const SagaBatchEvals&);

 private:
  std::vector<Vector> phi_;
  std::vector<Vector> g_cache_;
  std::vector<Matrix> jac_cache_;
  Vector g_avg_;
  Matrix jac_avg_;
  std::uint64_t updates_since_rebuild_ = 0;
};

// Per-batch evaluations of G_j(x), dG_j(x), produced by saga_estimate and
// reused by saga_update_table so the table refresh adds no oracle queries.
struct SagaBatchEvals {
  std::vector<Vector> g;
  std::vector<Matrix> jac;
};

// Ghat = (1/A) sum_{j in batch} (G_j(x) - cached G_j(phi_j)) + Gavg,
// same shape for the Jacobian. Meters A g_evals + A g_jacs.
InnerEstimate saga_estimate(const SagaTable& table, const CompositionProblem& p,
                            const Vector& x, const MiniBatch& batch,
                            QueryCounter& qc, SagaBatchEvals* evals_out = nullptr);

// For each batch index in order: phi_j <- x, refresh the cache entry from
// the paired evaluations, apply the (1/m)(new - old) average delta.
// Duplicates are processed sequentially, so a repeat after the first is a
// no-op. Adds no oracle queries.
void saga_update_table(SagaTable& table, const Vector& x, const MiniBatch& batch,
                       const SagaBatchEvals& evals);

}  // namespace compopt
