#pragma once

#include <Eigen/Core>

#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace weylap {

/// Largest state dimension supported by signals and solvers.
inline constexpr int kMaxDim = 8;

/// Point value of a signal in R^n. Heap-free for n <= kMaxDim.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// (window length or parameter, estimate) pairs recorded by iterative estimators.
using History = std::vector<std::pair<double, double>>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonIntegrableTail : public Error {
 public:
  using Error::Error;
};

class DegenerateScan : public Error {
 public:
  using Error::Error;
};

class EmptyRange : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidExponent : public Error {
 public:
  using Error::Error;
};

class ExponentMismatch : public Error {
 public:
  using Error::Error;
};

class NegativeTime : public Error {
 public:
  using Error::Error;
};

class StabilityViolation : public Error {
 public:
  using Error::Error;
};

class NotAContraction : public Error {
 public:
  using Error::Error;
};

class HypothesisViolated : public Error {
 public:
  using Error::Error;
};

/// An iterative estimator ran out of budget. Carries what it saw.
class NotConverged : public Error {
 public:
  NotConverged(const std::string& what, History history)
      : Error(what), history_(std::move(history)) {}
  const History& history() const noexcept { return history_; }

 private:
  History history_;
};

class MaxIterExceeded : public Error {
 public:
  MaxIterExceeded(const std::string& what, std::vector<double> residuals)
      : Error(what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residuals() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

inline Vec zero_vec(int n) { return Vec::Zero(n); }

inline Vec scalar_vec(double x) {
  Vec v(1);
  v(0) = x;
  return v;
}

}  // namespace weylap
