#pragma once

// Stepanov / Weyl seminorm estimators.
//
// The sup over xi in R is replaced by a max over a finite xi-grid. Window
// integrals use the composite midpoint rule on a cell lattice anchored at
// t = 0: a window of length l is split into n = ceil(l * density) cells of
// width c = l / n, and the xi-grid consists of the multiples of m * c
// (m = round(xi_step / c)) lying in [xi_min, xi_max]. Because every window
// and every xi share one lattice, discrete seminorm identities (Minkowski,
// power-mean ordering, window subdivision) hold up to rounding only.

#include "weylap/common.hpp"
#include "weylap/signal.hpp"

#include <functional>
#include <vector>

namespace weylap {

struct ScanSpec {
  double xi_min = -5.0;
  double xi_max = 5.0;
  double xi_step = 0.01;
  int quad_points_per_unit = 256;

  /// Throws InvalidArgument when the invariants do not hold.
  void validate() const;
};

/// Geometric window schedule l_k = l0 * factor^k, k < max_windows.
struct WindowSchedule {
  double l0 = 1.0;
  double factor = 2.0;
  int max_windows = 16;

  std::vector<double> windows() const;
};

struct SeminormEstimate {
  double value = 0.0;
  double p = 1.0;
  double window_l = 0.0;
  double argmax_xi = 0.0;
  bool converged = true;
  History history;  ///< (l, estimate); Weyl mode only
};

/// max over the scan grid of ((1/l) int_xi^{xi+l} |f|^p)^(1/p).
/// Throws DegenerateScan when the xi-grid is empty.
SeminormEstimate stepanov_norm(const Signal& f, double p, double l, const ScanSpec& scan);

/// Stepanov estimates along the window schedule, stopping once
/// |e_k - e_{k-1}| <= tol (1 + e_k). Throws NotConverged (with the history)
/// if the schedule runs out first.
SeminormEstimate weyl_norm(const Signal& f, double p, const WindowSchedule& schedule, double tol,
                           const ScanSpec& scan);

SeminormEstimate stepanov_distance(const Signal& f, const Signal& g, double p, double l,
                                   const ScanSpec& scan);

/// S^1_l distance with the truncated norm min(1, |f - g|).
SeminormEstimate truncated_distance(const Signal& f, const Signal& g, double l, const ScanSpec& scan);

/// max over xi of ((1/l) sup_{T in window, |T| <= delta l} int_T |f|^p)^(1/p).
/// The inner sup is exact for the cell measure: the top delta*l of cell
/// mass, the last cell taken fractionally.
double danilov_tail(const Signal& f, double p, double delta_fraction, double l, const ScanSpec& scan);

struct DanilovStep {
  double delta = 0.0;
  double l = 0.0;
  double value = 0.0;
};

struct DanilovMembership {
  bool in_mstar = false;
  std::vector<DanilovStep> history;
};

/// Evaluates danilov_tail along the diagonal (deltas[k], windows[k]) (the
/// shorter list is padded with its last entry). in_mstar iff the final
/// value is below tol. Throws NotConverged when the final value is above tol
/// but the sequence is still moving by more than tol (1 + value).
DanilovMembership danilov_membership(const Signal& f, double p, const std::vector<double>& windows,
                                     const std::vector<double>& deltas, double tol,
                                     const ScanSpec& scan);

namespace detail {

/// Lattice shared by every sliding-window estimator.
struct WindowLattice {
  int cells_per_window = 1;  ///< n
  double cell = 1.0;         ///< c = l / n
  long long stride = 1;      ///< m, xi-step in cells
  long long first_window = 0;
  long long window_count = 0;
  long long first_cell = 0;  ///< lattice index of the first evaluated cell
  long long cell_count = 0;

  double xi(long long j) const { return static_cast<double>((first_window + j) * stride) * cell; }
  double midpoint(long long i) const { return (static_cast<double>(first_cell + i) + 0.5) * cell; }
};

WindowLattice make_lattice(double l, const ScanSpec& scan);

/// Integrand values at every lattice cell midpoint (parallel, deterministic).
std::vector<double> sample_cells(const WindowLattice& lattice,
                                 const std::function<double(double)>& integrand);

struct WindowMax {
  double mean = 0.0;  ///< max window average of the integrand
  double xi = 0.0;
};

WindowMax max_window_mean(const WindowLattice& lattice, const std::vector<double>& cells);

/// |v|^p with the p = 1, 2 cases computed without pow.
double norm_pow(const Vec& v, double p);

}  // namespace detail

}  // namespace weylap
