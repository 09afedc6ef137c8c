#include "weylap/semigroup.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace weylap {

namespace {

void require_finite(const Mat& A) {
  if (!A.allFinite()) throw InvalidArgument("generator has non-finite entries");
}

}  // namespace

const char* to_string(SemigroupKind k) {
  switch (k) {
    case SemigroupKind::scalar: return "scalar";
    case SemigroupKind::diagonal: return "diagonal";
    case SemigroupKind::dense: return "dense";
  }
  return "?";
}

Semigroup::Semigroup(SemigroupKind kind, Mat generator, double M, double delta)
    : kind_(kind), generator_(std::move(generator)), M_(M), delta_(delta) {
  if (generator_.rows() < 1 || generator_.rows() > kMaxDim || generator_.rows() != generator_.cols())
    throw DimensionMismatch("generator must be square with 1 <= n <= 8");
  require_finite(generator_);
  if (!(M_ >= 1.0) || !std::isfinite(M_)) throw InvalidArgument("envelope constant M must be >= 1");
  if (!(delta_ > 0.0) || !std::isfinite(delta_)) throw InvalidArgument("decay rate delta must be positive");
}

Semigroup Semigroup::scalar(double a) {
  if (!(a < 0.0)) throw InvalidArgument("scalar generator must be negative");
  Mat A(1, 1);
  A(0, 0) = a;
  return Semigroup(SemigroupKind::scalar, A, 1.0, -a);
}

Semigroup Semigroup::diagonal(std::vector<double> lambdas) {
  if (lambdas.empty()) throw InvalidArgument("diagonal generator needs at least one eigenvalue");
  if (lambdas.size() > static_cast<std::size_t>(kMaxDim))
    throw DimensionMismatch("at most 8 diagonal entries are supported");
  for (double l : lambdas)
    if (!(l < 0.0)) throw InvalidArgument("diagonal entries must be negative");
  const int n = static_cast<int>(lambdas.size());
  Mat A = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) A(i, i) = lambdas[static_cast<std::size_t>(i)];
  const double top = *std::max_element(lambdas.begin(), lambdas.end());
  return Semigroup(SemigroupKind::diagonal, A, 1.0, -top);
}

Semigroup Semigroup::dense(const Mat& A, double M, double delta) {
  return Semigroup(SemigroupKind::dense, A, M, delta);
}

Semigroup Semigroup::with_envelope(double M, double delta) const {
  return Semigroup(kind_, generator_, M, delta);
}

Mat Semigroup::matrix(double t) const {
  if (t < 0.0) throw NegativeTime("semigroup evaluated at negative time");
  const int n = dim();
  if (t == 0.0) return Mat::Identity(n, n);
  if (kind_ != SemigroupKind::dense) {
    Mat E = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) E(i, i) = std::exp(generator_(i, i) * t);
    return E;
  }
  const Eigen::MatrixXd tA = generator_ * t;
  const Eigen::MatrixXd E = tA.exp();
  return E;
}

Vec Semigroup::apply(double t, const Vec& x) const {
  if (t < 0.0) throw NegativeTime("semigroup evaluated at negative time");
  if (x.size() != dim()) throw DimensionMismatch("state dimension does not match the generator");
  if (t == 0.0) return x;
  if (kind_ != SemigroupKind::dense) {
    Vec y(x.size());
    for (int i = 0; i < dim(); ++i) y(i) = std::exp(generator_(i, i) * t) * x(i);
    return y;
  }
  return matrix(t) * x;
}

double Semigroup::norm(double t) const {
  const Mat E = matrix(t);
  if (kind_ != SemigroupKind::dense) return E.diagonal().cwiseAbs().maxCoeff();
  const Eigen::MatrixXd dense = E;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense);
  return svd.singularValues()(0);
}

StabilityCheck verify_stability(const Semigroup& S, const std::vector<double>& t_grid) {
  StabilityCheck out;
  for (double t : t_grid) {
    if (t < 0.0) throw NegativeTime("stability grid must lie in [0, inf)");
    const double ratio = S.norm(t) / (S.M() * std::exp(-S.delta() * t));
    if (ratio > out.worst_ratio) {
      out.worst_ratio = ratio;
      out.worst_t = t;
    }
  }
  out.ok = out.worst_ratio <= 1.0 + 1e-8;
  return out;
}

StabilityCheck verify_stability(const Semigroup& S) {
  std::vector<double> grid(401);
  const double horizon = 10.0 / S.delta();
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid[i] = horizon * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
  return verify_stability(S, grid);
}

}  // namespace weylap
