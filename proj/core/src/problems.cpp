#include "compopt/problems.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "compopt/oracles.hpp"
#include "compopt/rng.hpp"

namespace compopt {

namespace {

Matrix gaussian_matrix(int rows, int cols, Xoshiro256& rng) {
  Matrix a(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) a(r, c) = rng.next_normal();
  return a;
}

// Random orthogonal matrix: QR of a Gaussian matrix, columns sign-fixed by
// the R diagonal so the result is deterministic.
Matrix random_orthogonal(int N, Xoshiro256& rng) {
  const Matrix a = gaussian_matrix(N, N, rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < N; ++c)
    if (r(c, c) < 0.0) q.col(c) *= -1.0;
  return q;
}

}  // namespace

// ---------------------------------------------------------------------------
// MeanVarianceProblem

MeanVarianceProblem::MeanVarianceProblem(std::vector<Vector> rewards, double lambda,
                                         bool explicit_strong_convexity)
    : rewards_(std::move(rewards)),
      lambda_(lambda),
      explicit_sc_(explicit_strong_convexity) {
  if (rewards_.empty()) throw ConfigError("mean-variance: needs at least one reward");
  if (lambda_ < 0.0) throw ConfigError("mean-variance: lambda must be >= 0");
  dim_x_ = static_cast<int>(rewards_[0].size());
  for (const auto& r : rewards_)
    if (r.size() != dim_x_) throw ConfigError("mean-variance: ragged reward rows");
}

Vector MeanVarianceProblem::eval_g(int j, const Vector& x) const {
  require_dim(x, dim_x_, "eval_g");
  Vector y(dim_x_ + 1);
  y.head(dim_x_) = x;
  y[dim_x_] = rewards_[static_cast<std::size_t>(j)].dot(x);
  return y;
}

Matrix MeanVarianceProblem::jac_g(int j, const Vector& x) const {
  require_dim(x, dim_x_, "jac_g");
  Matrix jac(dim_x_ + 1, dim_x_);
  jac.topRows(dim_x_) = Matrix::Identity(dim_x_, dim_x_);
  jac.row(dim_x_) = rewards_[static_cast<std::size_t>(j)].transpose();
  return jac;
}

double MeanVarianceProblem::eval_f(int i, const Vector& y) const {
  require_dim(y, dim_y(), "eval_f");
  const auto y1 = y.head(dim_x_);
  const double ry = rewards_[static_cast<std::size_t>(i)].dot(y1);
  const double dev = ry - y[dim_x_];
  double v = -ry + dev * dev;
  if (explicit_sc_) v -= 0.5 * lambda_ * y1.squaredNorm();
  return v;
}

Vector MeanVarianceProblem::grad_f(int i, const Vector& y) const {
  require_dim(y, dim_y(), "grad_f");
  const auto& r = rewards_[static_cast<std::size_t>(i)];
  const auto y1 = y.head(dim_x_);
  const double dev = r.dot(y1) - y[dim_x_];
  Vector g(dim_y());
  g.head(dim_x_) = -r + 2.0 * dev * r;
  if (explicit_sc_) g.head(dim_x_) -= lambda_ * y1;
  g[dim_x_] = -2.0 * dev;
  return g;
}

std::optional<Optimum> MeanVarianceProblem::compute_optimum() const {
  std::lock_guard<std::mutex> lock(*opt_mutex_);
  if (cached_opt_) return cached_opt_;

  const int N = dim_x_;
  const int count = n();
  Vector rbar = Vector::Zero(N);
  for (const auto& r : rewards_) rbar += r;
  rbar /= static_cast<double>(count);

  // P is quadratic: Hessian 2C (+ lambda I unless the explicit-strong-
  // convexity rewrite cancels R), C the centered reward second moment.
  Matrix cov = Matrix::Zero(N, N);
  for (const auto& r : rewards_) {
    const Vector d = r - rbar;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(count);
  Matrix hess = 2.0 * cov;
  if (!explicit_sc_) hess += lambda_ * Matrix::Identity(N, N);

  Eigen::LDLT<Matrix> ldlt(hess);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("mean-variance optimum: Hessian factorization failed");

  Vector x = Vector::Zero(N);
  const int max_polish = 100;
  bool converged = false;
  for (int it = 0; it < max_polish; ++it) {
    const Vector g = full_gradient(*this, x);
    if (g.norm() <= 1e-12) {
      converged = true;
      break;
    }
    x -= ldlt.solve(g);
  }
  if (!converged && full_gradient(*this, x).norm() > 1e-12)
    throw std::runtime_error("mean-variance optimum: Newton polish did not reach 1e-12");

  cached_opt_ = Optimum{x, objective(*this, x)};
  return cached_opt_;
}

// ---------------------------------------------------------------------------
// BellmanToyProblem

BellmanToyProblem::BellmanToyProblem(std::vector<Matrix> B, std::vector<Vector> b,
                                     double lambda)
    : B_(std::move(B)), b_(std::move(b)), lambda_(lambda) {
  if (B_.empty() || B_.size() != b_.size())
    throw ConfigError("bellman: B and b must be non-empty and equally sized");
  if (lambda_ < 0.0) throw ConfigError("bellman: lambda must be >= 0");
  mean_B_ = Matrix::Zero(B_[0].rows(), B_[0].cols());
  mean_b_ = Vector::Zero(b_[0].size());
  for (std::size_t j = 0; j < B_.size(); ++j) {
    mean_B_ += B_[j];
    mean_b_ += b_[j];
  }
  mean_B_ /= static_cast<double>(B_.size());
  mean_b_ /= static_cast<double>(B_.size());
}

Vector BellmanToyProblem::eval_g(int j, const Vector& x) const {
  require_dim(x, dim_x(), "eval_g");
  return B_[static_cast<std::size_t>(j)] * x - b_[static_cast<std::size_t>(j)];
}

Matrix BellmanToyProblem::jac_g(int j, const Vector& x) const {
  require_dim(x, dim_x(), "jac_g");
  return B_[static_cast<std::size_t>(j)];
}

double BellmanToyProblem::eval_f(int /*i*/, const Vector& y) const {
  require_dim(y, dim_y(), "eval_f");
  return y.squaredNorm();
}

Vector BellmanToyProblem::grad_f(int /*i*/, const Vector& y) const {
  require_dim(y, dim_y(), "grad_f");
  return 2.0 * y;
}

std::optional<Optimum> BellmanToyProblem::compute_optimum() const {
  const int N = dim_x();
  const Matrix lhs =
      2.0 * mean_B_.transpose() * mean_B_ + lambda_ * Matrix::Identity(N, N);
  const Vector rhs = 2.0 * mean_B_.transpose() * mean_b_;
  const Vector x = lhs.ldlt().solve(rhs);
  return Optimum{x, objective(*this, x)};
}

// ---------------------------------------------------------------------------
// SplitQuadraticProblem

SplitQuadraticProblem::SplitQuadraticProblem(Vector c, double lambda)
    : c_(std::move(c)), lambda_(lambda) {
  if (c_.size() == 0) throw ConfigError("split-quadratic: empty c");
  if (lambda_ <= 0.0) throw ConfigError("split-quadratic: lambda must be > 0");
}

Vector SplitQuadraticProblem::eval_g(int /*j*/, const Vector& x) const {
  require_dim(x, dim_x(), "eval_g");
  return x;
}

Matrix SplitQuadraticProblem::jac_g(int /*j*/, const Vector& x) const {
  require_dim(x, dim_x(), "jac_g");
  return Matrix::Identity(dim_x(), dim_x());
}

double SplitQuadraticProblem::eval_f(int i, const Vector& y) const {
  require_dim(y, dim_y(), "eval_f");
  if (i == 0) return -y.squaredNorm();
  return 3.0 * y.squaredNorm() - 2.0 * c_.dot(y);
}

Vector SplitQuadraticProblem::grad_f(int i, const Vector& y) const {
  require_dim(y, dim_y(), "grad_f");
  if (i == 0) return -2.0 * y;
  return 6.0 * y - 2.0 * c_;
}

std::optional<Optimum> SplitQuadraticProblem::compute_optimum() const {
  // P(x) = (1 + lambda/2)||x||^2 - <c, x>.
  const Vector x = c_ / (2.0 + lambda_);
  return Optimum{x, objective(*this, x)};
}

// ---------------------------------------------------------------------------
// Generators

Matrix mean_variance_covariance(int N, double kappa, std::uint64_t seed) {
  if (kappa < 1.0) throw ConfigError("generate_mean_variance: kappa must be >= 1");
  Xoshiro256 rng(seed, "mv-covariance");
  Vector s(N);
  for (int k = 0; k < N; ++k)
    s[k] = (N == 1) ? 1.0
                    : std::pow(kappa, static_cast<double>(k) /
                                          static_cast<double>(N - 1));
  const Matrix q = random_orthogonal(N, rng);
  return q * s.asDiagonal() * q.transpose();
}

MeanVarianceProblem generate_mean_variance(int n, int N, double kappa,
                                           std::uint64_t seed, double lambda,
                                           bool explicit_strong_convexity) {
  if (n < 2) throw ConfigError("generate_mean_variance: n must be >= 2");
  if (N < 1) throw ConfigError("generate_mean_variance: N must be >= 1");
  if (kappa < 1.0) throw ConfigError("generate_mean_variance: kappa must be >= 1");

  Xoshiro256 cov_rng(seed, "mv-covariance");
  Vector s(N);
  for (int k = 0; k < N; ++k)
    s[k] = (N == 1) ? 1.0
                    : std::pow(kappa, static_cast<double>(k) /
                                          static_cast<double>(N - 1));
  const Matrix q = random_orthogonal(N, cov_rng);
  Matrix sqrt_cov = q * s.cwiseSqrt().asDiagonal() * q.transpose();

  Xoshiro256 rng(seed, "mv-rewards");
  std::vector<Vector> rewards;
  rewards.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Vector z(N);
    for (int k = 0; k < N; ++k) z[k] = rng.next_normal();
    rewards.push_back(sqrt_cov * z);
  }
  return MeanVarianceProblem(std::move(rewards), lambda, explicit_strong_convexity);
}

BellmanToyProblem generate_bellman_toy(int m, int M, int N, double lambda,
                                       std::uint64_t seed) {
  if (m < 1) throw ConfigError("generate_bellman_toy: m must be >= 1");
  if (M < 1 || N < 1) throw ConfigError("generate_bellman_toy: dimensions must be >= 1");
  Xoshiro256 rng(seed, "bellman");
  std::vector<Matrix> B;
  std::vector<Vector> b;
  B.reserve(static_cast<std::size_t>(m));
  b.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    B.push_back(gaussian_matrix(M, N, rng));
    Vector bj(M);
    for (int r = 0; r < M; ++r) bj[r] = rng.next_normal();
    b.push_back(std::move(bj));
  }
  return BellmanToyProblem(std::move(B), std::move(b), lambda);
}

SplitQuadraticProblem generate_split_quadratic(int N, double lambda,
                                               std::uint64_t seed) {
  if (N < 1) throw ConfigError("generate_split_quadratic: N must be >= 1");
  Xoshiro256 rng(seed, "split-quadratic");
  Vector c(N);
  for (int k = 0; k < N; ++k) c[k] = rng.next_normal();
  return SplitQuadraticProblem(std::move(c), lambda);
}

Optimum optimum_oracle(const CompositionProblem& p) {
  auto opt = p.compute_optimum();
  if (!opt) throw std::runtime_error("optimum_oracle: problem has no optimum oracle");
  return *opt;
}

// ---------------------------------------------------------------------------
// Serialization

void save_mean_variance(const MeanVarianceProblem& p, std::ostream& os) {
  os.precision(17);
  os << p.n() << ' ' << p.dim_x() << ' ' << p.lambda() << '\n';
  for (const auto& r : p.rewards()) {
    for (int k = 0; k < r.size(); ++k) {
      if (k) os << ' ';
      os << r[k];
    }
    os << '\n';
  }
}

MeanVarianceProblem load_mean_variance(std::istream& is) {
  int n = 0, N = 0;
  double lambda = 0.0;
  if (!(is >> n >> N >> lambda))
    throw std::runtime_error("load_mean_variance: bad header");
  std::vector<Vector> rewards;
  rewards.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Vector r(N);
    for (int k = 0; k < N; ++k)
      if (!(is >> r[k])) throw std::runtime_error("load_mean_variance: truncated rewards");
    rewards.push_back(std::move(r));
  }
  return MeanVarianceProblem(std::move(rewards), lambda);
}

}  // namespace compopt
