#pragma once

// Mild solutions u(t) = int_{-inf}^t T(t - s) f(s, u(s)) ds of
// u' = A u + f(t, u) for an exponentially stable T(t) = exp(tA).

#include "weylap/seminorm.hpp"
#include "weylap/semigroup.hpp"
#include "weylap/signal.hpp"

#include <optional>
#include <vector>

namespace weylap {

struct LinearOptions {
  double tail_tol = 1e-6;
  int density = 256;  ///< midpoint cells per unit time
  double p = 1.0;     ///< exponent of the Stepanov bound used for the tail
  /// Known bound on |f|_{S^p_1}; measured on the truncation range when empty.
  std::optional<double> stepanov_bound;
};

struct LinearValue {
  Vec value;
  double tail_bound = 0.0;  ///< certified bound on the discarded integral over (-inf, lower)
  double quad_tol = 0.0;    ///< |Q_h - Q_2h|
  double lower = 0.0;       ///< lower integration limit actually used
  double stepanov_bound = 0.0;
};

struct PicardInfo {
  int iterations = 0;              ///< Gamma applications before the confirming one (>= 1)
  std::vector<double> residuals;   ///< sup-grid |u_{m+1} - u_m|, m = 0, 1, ...
  double k_estimate = 0.0;         ///< largest observed residual ratio
  double k_bound = 0.0;            ///< contraction constant of Gamma
};

struct MildSolution {
  std::vector<double> t;  ///< increasing grid
  std::vector<Vec> u;
  double tail_bound = 0.0;
  double quad_tol = 0.0;
  std::optional<PicardInfo> picard;

  int dim() const { return u.empty() ? 0 : static_cast<int>(u.front().size()); }
  /// Piecewise-linear interpolation; throws InvalidArgument outside the grid.
  Vec at(double s) const;
  double sup_norm() const;
  /// The samples as a piecewise-linear Signal.
  Signal as_signal() const;
};

/// int_lower^t T(t - s) f(s) ds with the truncation point chosen from
///   M |f|_{S^p_1} e^{-delta (t - b)} / (1 - e^{-delta}) <= tail_tol.
/// Signals vanishing left of a certified edge are integrated from the edge
/// without any tail. Throws StabilityViolation if the declared envelope
/// fails verify_stability.
LinearValue linear_mild_solution(const Semigroup& S, const Signal& f, double t,
                                 const LinearOptions& options = {});

/// Pointwise evaluation on a grid (parallel over grid points).
MildSolution linear_mild_solution(const Semigroup& S, const Signal& f,
                                  const std::vector<double>& grid, const LinearOptions& options = {});

/// M |f|_{S^p_1} / (1 - e^{-delta}).
double linear_solution_bound(const Semigroup& S, const Signal& f, double p, const ScanSpec& scan);

struct ContractionCheck {
  double k = 0.0;
  double threshold = 0.0;
  bool satisfied_13 = false;
};

/// k = (M^q/(delta q))^{1/q} e^delta/(e^delta - 1) |L|, q = p/(p-1); at p = 1
/// the Hoelder factor is its q -> inf limit M.
ContractionCheck contraction_constant(double M, double delta, double p, double normL);

struct WeylCondition {
  bool satisfied = false;
  double bound = 0.0;
};

/// The p = 2 and p > 2 sufficient conditions on |L|_{W^p}. InvalidExponent for p < 2.
WeylCondition weyl_condition_check(double M, double delta, double p, double normL);

struct PicardOptions {
  double t0 = 0.0;
  double t1 = 20.0;
  double step = 0.01;
  double p = 2.0;
  double tail_tol = 1e-8;
  int max_iter = 100;
  double res_tol = 1e-10;
  ScanSpec scan;  ///< used to measure |L|_{S^p_1} and |f(., 0)|_{S^1_1}
};

/// Fixed point of Gamma u(t) = int_{-inf}^t T(t - s) f(s, u(s)) ds on
/// [t0, t1], iterated from u_0 = 0. Each sweep uses the exact recursion
///   u(t_{i+1}) = T(h) u(t_i) + int_{t_i}^{t_{i+1}} T(t_{i+1} - s) f(s, u(s)) ds
/// with u piecewise linear between nodes, started far enough left that the
/// neglected history is below tail_tol.
/// Throws NotAContraction, InvalidExponent (non-constant L with p < 2),
/// StabilityViolation or MaxIterExceeded.
MildSolution picard_solve(const Semigroup& S, const ParametricSignal& f, const PicardOptions& options);

/// One application of Gamma to the piecewise-linear function through
/// (grid, values), started from zero at grid.front(). Exposed for testing the
/// contraction property.
std::vector<Vec> apply_gamma(const Semigroup& S, const ParametricSignal& f, const std::vector<double>& grid,
                             const std::vector<Vec>& values);

/// alpha * delta / (delta - beta), delta = min deltas, beta = sum betas.
double gronwall_bound(double alpha, const std::vector<double>& betas, const std::vector<double>& deltas);

struct TranslationDiagnostic {
  double alpha0 = 0.0;
  double weighted = 0.0;
  double tail_bound = 0.0;
  double horizon = 0.0;  ///< integrals truncated to [-horizon, 0]
};

struct DiagnosticOptions {
  double tail_tol = 1e-6;
  int density = 256;
};

/// h(s) = (1/l) int_s^{s+l} |f(t + tau, u(t)) - f(t, u(t))|^p dt,
/// alpha0 = int_{-inf}^0 e^{delta1 s} h(s) ds,
/// weighted = int_{-inf}^0 e^{gamma r} int_{-inf}^r e^{-delta1 (r - s)} h(s) ds dr.
/// u may be omitted when f does not depend on u.
TranslationDiagnostic translation_diagnostic(const ParametricSignal& f, const MildSolution* u, double tau,
                                             double p, double l, double delta1, double gamma,
                                             const DiagnosticOptions& options = {});

}  // namespace weylap
