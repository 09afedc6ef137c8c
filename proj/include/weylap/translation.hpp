#pragma once

// epsilon-translation numbers and the Bohr / Stepanov / Weyl ladder.
//
// Relative density can only be observed on the scanned tau-range. A set is
// reported as relatively dense when it is nonempty and its largest gap
// (range endpoints included) is at most `dense_fraction` of the range
// length; density_bound_k is then that gap, otherwise +inf.

#include "weylap/seminorm.hpp"
#include "weylap/signal.hpp"

#include <string>
#include <vector>

namespace weylap {

enum class Convention {
  classical,  ///< sup over xi of the S^p_l window distance
  ursell,     ///< the single window [0, l]
  bohr,       ///< sup-norm on a probe grid
};

const char* to_string(Convention c);

struct TauGrid {
  double min = 0.0;
  double max = 50.0;
  double step = 0.01;

  /// Grid points min + i*step up to max; values within 1e-9 step of 0 are
  /// snapped to exactly 0. Throws EmptyRange when min > max or step <= 0.
  std::vector<double> points() const;
};

struct TranslationQuery {
  double eps = 0.1;
  double p = 1.0;
  double l = 1.0;
  Convention convention = Convention::classical;
  TauGrid tau;
  ScanSpec scan;
  double dense_fraction = 0.25;
};

struct AcceptedTau {
  double tau = 0.0;
  double margin = 0.0;  ///< eps - measured distance, always > 0
};

struct TranslationSet {
  std::vector<AcceptedTau> accepted;
  long long rejected_count = 0;
  double max_gap = 0.0;
  double density_bound_k = kInf;
  TauGrid range;
  Convention convention = Convention::classical;
  double eps = 0.0;
  double p = 1.0;
  double l = 0.0;
  std::vector<std::pair<double, double>> landscape;  ///< (tau, distance) for every grid point

  bool relatively_dense() const { return std::isfinite(density_bound_k); }
  bool accepts(double tau) const;
};

/// Distance between f(. + tau) and f under the given convention. For bohr
/// the probe grid is the scan range at quadrature density; p and l are
/// unused.
double translation_distance(const Signal& f, double tau, double p, double l, Convention convention,
                            const ScanSpec& scan);

/// Tests every tau on the grid; tau is accepted iff distance < eps.
TranslationSet scan_translations(const Signal& f, const TranslationQuery& query);

enum class ApClass { bohr, stepanov, weyl, unresolved };

const char* to_string(ApClass c);

struct ClassifyPolicy {
  std::vector<double> weyl_windows = WindowSchedule{}.windows();
  ScanSpec scan;
  TauGrid tau;
  double stepanov_window = 1.0;
  double dense_fraction = 0.25;
};

struct Classification {
  ApClass label = ApClass::unresolved;
  bool bohr = false;
  bool stepanov = false;
  bool weyl = false;
  double weyl_window = 0.0;  ///< first window with a relatively dense set (0 if none)
  TranslationSet bohr_set;
  TranslationSet stepanov_set;
  std::vector<TranslationSet> weyl_sets;  ///< one per window tried, in schedule order
};

/// Runs the bohr, stepanov (window 1) and weyl (first dense window of the
/// schedule) scans and returns the strongest label with a relatively dense set.
Classification classify(const Signal& f, double eps, double p, const ClassifyPolicy& policy);

struct UrsellAgreement {
  double agree_fraction = 0.0;
  std::vector<double> disagreements;  ///< tau values decided differently
  TranslationSet classical;
  TranslationSet ursell;
};

UrsellAgreement ursell_agreement(const Signal& f, double eps, double p, double l, const TauGrid& tau,
                                 const ScanSpec& scan);

}  // namespace weylap
