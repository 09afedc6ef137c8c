#pragma once

// Exponentially stable semigroups T(t) = exp(tA) on R^n with a declared
// envelope |T(t)| <= M exp(-delta t) in the operator 2-norm.

#include "weylap/common.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace weylap {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

enum class SemigroupKind { scalar, diagonal, dense };

class Semigroup {
 public:
  /// T(t) = exp(a t), a < 0; M = 1, delta = -a.
  static Semigroup scalar(double a);
  /// T(t) = diag(exp(lambda_i t)), all lambda_i < 0; M = 1, delta = -max lambda_i.
  static Semigroup diagonal(std::vector<double> lambdas);
  /// T(t) = exp(tA) with a declared (unverified) envelope; see verify_stability.
  static Semigroup dense(const Mat& A, double M, double delta);

  /// Same generator, different claimed envelope.
  Semigroup with_envelope(double M, double delta) const;

  SemigroupKind kind() const { return kind_; }
  int dim() const { return static_cast<int>(generator_.rows()); }
  double M() const { return M_; }
  double delta() const { return delta_; }
  const Mat& generator() const { return generator_; }

  /// exp(tA) x. Throws NegativeTime for t < 0. t = 0 returns x unchanged.
  Vec apply(double t, const Vec& x) const;
  /// exp(tA) as a matrix.
  Mat matrix(double t) const;
  /// |exp(tA)| in the operator 2-norm.
  double norm(double t) const;

 private:
  Semigroup(SemigroupKind kind, Mat generator, double M, double delta);
  SemigroupKind kind_;
  Mat generator_;
  double M_;
  double delta_;
};

const char* to_string(SemigroupKind k);

struct StabilityCheck {
  bool ok = false;
  double worst_ratio = 0.0;  ///< max_t |T(t)| / (M exp(-delta t))
  double worst_t = 0.0;
};

/// ok iff worst_ratio <= 1 + 1e-8 on the grid.
StabilityCheck verify_stability(const Semigroup& S, const std::vector<double>& t_grid);
/// Default grid: 401 uniform points on [0, 10 / delta].
StabilityCheck verify_stability(const Semigroup& S);

}  // namespace weylap
