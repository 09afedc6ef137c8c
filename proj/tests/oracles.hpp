#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's quadrature or lattice code.

#include "weylap/signal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline const double kSqrtE = std::sqrt(std::exp(1.0));

inline double step(double t) { return (t >= 0.0 && t < 0.5) ? 1.0 : 0.0; }

inline double primitive(double t) { return std::clamp(t, 0.0, 0.5); }

inline double relaxed(double t) {
  if (t <= 0.0) return 0.0;
  if (t < 0.5) return 1.0 - std::exp(-t);
  return (kSqrtE - 1.0) * std::exp(-t);
}

/// Composite Simpson on [a, b] with the interval first cut at `breaks`.
inline double simpson(const std::function<double(double)>& g, double a, double b, std::vector<double> breaks = {},
                      int panels_per_unit = 2000) {
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  double total = 0.0;
  for (std::size_t k = 1; k < breaks.size(); ++k) {
    const double lo = std::max(a, breaks[k - 1]);
    const double hi = std::min(b, breaks[k]);
    if (hi <= lo) continue;
    int n = std::max(2, static_cast<int>(std::ceil((hi - lo) * panels_per_unit)));
    if (n % 2) ++n;
    const double h = (hi - lo) / n;
    // One-sided limits at the piece ends keep jump discontinuities harmless.
    const double eps = 1e-13 * std::max(1.0, std::abs(lo) + std::abs(hi));
    double s = g(lo + eps) + g(hi - eps);
    for (int i = 1; i < n; ++i) s += g(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    total += s * h / 3.0;
  }
  return total;
}

/// max over xi in {xi_lo + k step} of ((1/l) int_xi^{xi+l} g)^(1/p).
inline double sup_window(const std::function<double(double)>& g, double p, double l, double xi_lo, double xi_hi,
                         double xi_step, const std::vector<double>& breaks = {}, int panels_per_unit = 2000) {
  double best = 0.0;
  for (double xi = xi_lo; xi <= xi_hi + 1e-12; xi += xi_step)
    best = std::max(best, simpson(g, xi, xi + l, breaks, panels_per_unit) / l);
  return std::pow(best, 1.0 / p);
}

/// Classical RK4 for a scalar ODE u' = rhs(t, u).
inline std::vector<double> rk4(const std::function<double(double, double)>& rhs, double t0, double u0, double h,
                               int steps) {
  std::vector<double> u{u0};
  double t = t0;
  double y = u0;
  for (int i = 0; i < steps; ++i) {
    const double k1 = rhs(t, y);
    const double k2 = rhs(t + h / 2, y + h / 2 * k1);
    const double k3 = rhs(t + h / 2, y + h / 2 * k2);
    const double k4 = rhs(t + h, y + h * k3);
    y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    t = t0 + (i + 1) * h;
    u.push_back(y);
  }
  return u;
}

/// Best mass of a subset of equal-measure cells with total measure <= budget
/// cells, found by exhaustive search: every choice of whole cells plus at most
/// one partially used cell.
inline double best_subset_mass(const std::vector<double>& values, double budget) {
  const int n = static_cast<int>(values.size());
  const int whole = static_cast<int>(std::floor(budget + 1e-12));
  const double frac = std::max(0.0, budget - whole);
  double best = 0.0;
  if (n <= 16) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      const int count = __builtin_popcount(mask);
      if (count > whole + 1) continue;
      double sum = 0.0;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) sum += values[static_cast<std::size_t>(i)];
      if (count <= whole) best = std::max(best, sum);
      if (count == whole + 1 && frac > 0.0)
        for (int j = 0; j < n; ++j)
          if (mask & (1u << j)) best = std::max(best, sum - (1.0 - frac) * values[static_cast<std::size_t>(j)]);
    }
    return best;
  }
  // Larger grids: enumerate index tuples directly (small budgets only).
  std::vector<int> pick;
  std::function<void(int, double)> rec = [&](int start, double sum) {
    const int count = static_cast<int>(pick.size());
    if (count <= whole) best = std::max(best, sum);
    if (count == whole + 1) {
      if (frac > 0.0)
        for (int j : pick) best = std::max(best, sum - (1.0 - frac) * values[static_cast<std::size_t>(j)]);
      return;
    }
    for (int i = start; i < n; ++i) {
      pick.push_back(i);
      rec(i + 1, sum + values[static_cast<std::size_t>(i)]);
      pick.pop_back();
    }
  };
  rec(0, 0.0);
  return best;
}

/// Danilov tail by brute force: the same midpoint cells as the library
/// (n = ceil(l density) cells per window, windows at multiples of the
/// rounded xi-step), each window searched exhaustively.
inline double danilov_bruteforce(const weylap::Signal& f, double p, double delta, double l, double xi_min,
                                 double xi_max, double xi_step, int density) {
  const int n = static_cast<int>(std::ceil(l * density - 1e-9));
  const double c = l / n;
  const long long m = std::max<long long>(1, std::llround(xi_step / c));
  double best = 0.0;
  for (long long j = static_cast<long long>(std::ceil(xi_min / (m * c) - 1e-9)); j * m * c <= xi_max + 1e-9; ++j) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(std::pow(std::abs(f.scalar((static_cast<double>(j * m + i) + 0.5) * c)), p));
    best = std::max(best, best_subset_mass(v, delta * n) / n);
  }
  return std::pow(best, 1.0 / p);
}

}  // namespace oracle

namespace gen {

/// Random lattice-friendly signals: every discontinuity lies on multiples
/// of 1/32, so midpoint samples at density 32 or 64 never straddle an edge.
inline weylap::Signal random_signal(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_real_distribution<double> amp(-2.0, 2.0);
  std::uniform_real_distribution<double> omega(0.2, 3.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<int> sixteenths(1, 48);
  auto trig = [&] {
    std::vector<weylap::TrigTerm> terms;
    const int count = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < count; ++i) terms.push_back({amp(rng), omega(rng), phase(rng)});
    return weylap::Signal::trig_sum(terms);
  };
  auto pulses = [&] {
    const double period = sixteenths(rng) / 16.0 + 0.25;
    const double width = std::min(period - 1.0 / 32.0, sixteenths(rng) / 32.0);
    return weylap::Signal::pulse_train(period, std::max(1.0 / 32.0, width), amp(rng), sixteenths(rng) / 32.0);
  };
  switch (kind(rng)) {
    case 0: return trig();
    case 1: return pulses();
    case 2: return weylap::Signal::exp_decay(amp(rng), omega(rng), -sixteenths(rng) / 16.0);
    default: return trig() + pulses();
  }
}

}  // namespace gen
