#include "weylap/seminorm.hpp"

#include "weylap/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace weylap {

namespace {

void require_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidExponent("exponent p must be a finite number >= 1");
}

void require_window(double l) {
  if (!(l > 0.0) || !std::isfinite(l)) throw InvalidArgument("window length l must be positive");
}

double root(double mean, double p) {
  if (p == 1.0) return mean;
  if (p == 2.0) return std::sqrt(mean);
  return std::pow(mean, 1.0 / p);
}

SeminormEstimate window_estimate(const std::function<double(double)>& integrand, double p, double l,
                                 const ScanSpec& scan) {
  require_exponent(p);
  require_window(l);
  scan.validate();
  const auto lattice = detail::make_lattice(l, scan);
  const auto cells = detail::sample_cells(lattice, integrand);
  const auto best = detail::max_window_mean(lattice, cells);
  SeminormEstimate est;
  est.value = root(best.mean, p);
  est.p = p;
  est.window_l = l;
  est.argmax_xi = best.xi;
  return est;
}

void require_same_dim(const Signal& f, const Signal& g) {
  if (f.dim() != g.dim()) throw DimensionMismatch("signals have different dimensions");
}

}  // namespace

void ScanSpec::validate() const {
  if (!std::isfinite(xi_min) || !std::isfinite(xi_max) || !(xi_min <= xi_max))
    throw InvalidArgument("scan needs finite xi_min <= xi_max");
  if (!(xi_step > 0.0)) throw InvalidArgument("scan xi_step must be positive");
  if (quad_points_per_unit < 16) throw InvalidArgument("quadrature density must be >= 16 points per unit");
}

std::vector<double> WindowSchedule::windows() const {
  if (!(l0 > 0.0)) throw InvalidArgument("schedule l0 must be positive");
  if (!(factor >= 2.0)) throw InvalidArgument("schedule factor must be >= 2");
  if (max_windows < 1) throw InvalidArgument("schedule needs at least one window");
  std::vector<double> out;
  double l = l0;
  for (int k = 0; k < max_windows; ++k, l *= factor) out.push_back(l);
  return out;
}

namespace detail {

WindowLattice make_lattice(double l, const ScanSpec& scan) {
  WindowLattice lat;
  const double density = scan.quad_points_per_unit;
  lat.cells_per_window = std::max(1, static_cast<int>(std::ceil(l * density - 1e-9)));
  lat.cell = l / lat.cells_per_window;
  lat.stride = std::max<long long>(1, std::llround(scan.xi_step / lat.cell));
  const double dxi = static_cast<double>(lat.stride) * lat.cell;
  const long long j_lo = static_cast<long long>(std::ceil(scan.xi_min / dxi - 1e-9));
  const long long j_hi = static_cast<long long>(std::floor(scan.xi_max / dxi + 1e-9));
  if (j_lo > j_hi) {
    std::ostringstream msg;
    msg << "no xi-grid point of spacing " << dxi << " lies in [" << scan.xi_min << ", " << scan.xi_max << "]";
    throw DegenerateScan(msg.str());
  }
  lat.first_window = j_lo;
  lat.window_count = j_hi - j_lo + 1;
  lat.first_cell = j_lo * lat.stride;
  lat.cell_count = (lat.window_count - 1) * lat.stride + lat.cells_per_window;
  return lat;
}

std::vector<double> sample_cells(const WindowLattice& lattice,
                                 const std::function<double(double)>& integrand) {
  std::vector<double> cells(static_cast<std::size_t>(lattice.cell_count));
  parallel_for(cells.size(), [&](std::size_t i) {
    cells[i] = integrand(lattice.midpoint(static_cast<long long>(i)));
  });
  return cells;
}

WindowMax max_window_mean(const WindowLattice& lattice, const std::vector<double>& cells) {
  const long long n = lattice.cells_per_window;
  const long long m = lattice.stride;
  long double sum = 0.0L;
  for (long long i = 0; i < n; ++i) sum += cells[static_cast<std::size_t>(i)];
  WindowMax best{static_cast<double>(sum / n), lattice.xi(0)};
  for (long long j = 1; j < lattice.window_count; ++j) {
    const long long old_start = (j - 1) * m;
    for (long long i = 0; i < m; ++i) {
      sum += cells[static_cast<std::size_t>(old_start + n + i)];
      sum -= cells[static_cast<std::size_t>(old_start + i)];
    }
    const double mean = static_cast<double>(sum / n);
    if (mean > best.mean) best = {mean, lattice.xi(j)};
  }
  best.mean = std::max(best.mean, 0.0);
  return best;
}

double norm_pow(const Vec& v, double p) {
  if (p == 2.0) return v.squaredNorm();
  const double r = v.norm();
  if (p == 1.0) return r;
  return std::pow(r, p);
}

}  // namespace detail

SeminormEstimate stepanov_norm(const Signal& f, double p, double l, const ScanSpec& scan) {
  return window_estimate(
      [&f, p](double t) {
        Vec v(f.dim());
        f.eval(t, v);
        return detail::norm_pow(v, p);
      },
      p, l, scan);
}

SeminormEstimate weyl_norm(const Signal& f, double p, const WindowSchedule& schedule, double tol,
                           const ScanSpec& scan) {
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  History history;
  SeminormEstimate last;
  for (double l : schedule.windows()) {
    const auto est = stepanov_norm(f, p, l, scan);
    history.emplace_back(l, est.value);
    if (history.size() >= 2) {
      const double prev = history[history.size() - 2].second;
      if (std::abs(est.value - prev) <= tol * (1.0 + est.value)) {
        last = est;
        last.history = std::move(history);
        last.converged = true;
        return last;
      }
    }
  }
  throw NotConverged("Weyl seminorm did not settle within the window schedule", std::move(history));
}

SeminormEstimate stepanov_distance(const Signal& f, const Signal& g, double p, double l,
                                   const ScanSpec& scan) {
  require_same_dim(f, g);
  return window_estimate(
      [&f, &g, p](double t) {
        Vec a(f.dim()), b(g.dim());
        f.eval(t, a);
        g.eval(t, b);
        return detail::norm_pow(a - b, p);
      },
      p, l, scan);
}

SeminormEstimate truncated_distance(const Signal& f, const Signal& g, double l, const ScanSpec& scan) {
  require_same_dim(f, g);
  return window_estimate(
      [&f, &g](double t) {
        Vec a(f.dim()), b(g.dim());
        f.eval(t, a);
        g.eval(t, b);
        return std::min(1.0, (a - b).norm());
      },
      1.0, l, scan);
}

double danilov_tail(const Signal& f, double p, double delta_fraction, double l, const ScanSpec& scan) {
  require_exponent(p);
  require_window(l);
  scan.validate();
  if (!(delta_fraction > 0.0 && delta_fraction < 1.0))
    throw InvalidArgument("delta_fraction must lie in (0, 1)");
  const auto lattice = detail::make_lattice(l, scan);
  const auto cells = detail::sample_cells(lattice, [&f, p](double t) {
    Vec v(f.dim());
    f.eval(t, v);
    return detail::norm_pow(v, p);
  });

  const long long n = lattice.cells_per_window;
  double allowed = delta_fraction * static_cast<double>(n);
  if (std::abs(allowed - std::round(allowed)) < 1e-9) allowed = std::round(allowed);
  const long long whole = static_cast<long long>(std::floor(allowed));
  const double fraction = allowed - static_cast<double>(whole);
  const long long take = std::min(n, whole + (fraction > 0.0 ? 1 : 0));

  std::vector<double> window_mass(static_cast<std::size_t>(lattice.window_count));
  parallel_for(window_mass.size(), [&](std::size_t j) {
    const auto begin = cells.begin() + static_cast<long long>(j) * lattice.stride;
    std::vector<double> window(begin, begin + n);
    if (take <= 0) {
      window_mass[j] = 0.0;
      return;
    }
    std::nth_element(window.begin(), window.begin() + (take - 1), window.end(), std::greater<>());
    std::sort(window.begin(), window.begin() + take, std::greater<>());
    long double mass = 0.0L;
    for (long long i = 0; i < std::min(whole, take); ++i) mass += window[static_cast<std::size_t>(i)];
    if (take > whole) mass += fraction * window[static_cast<std::size_t>(whole)];
    window_mass[j] = static_cast<double>(mass / n);
  });
  const double best = std::max(0.0, *std::max_element(window_mass.begin(), window_mass.end()));
  return root(best, p);
}

DanilovMembership danilov_membership(const Signal& f, double p, const std::vector<double>& windows,
                                     const std::vector<double>& deltas, double tol,
                                     const ScanSpec& scan) {
  if (windows.empty() || deltas.empty()) throw InvalidArgument("danilov schedules must be nonempty");
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  DanilovMembership out;
  const std::size_t steps = std::max(windows.size(), deltas.size());
  for (std::size_t k = 0; k < steps; ++k) {
    const double l = windows[std::min(k, windows.size() - 1)];
    const double delta = deltas[std::min(k, deltas.size() - 1)];
    out.history.push_back({delta, l, danilov_tail(f, p, delta, l, scan)});
  }
  const double last = out.history.back().value;
  out.in_mstar = last < tol;
  if (!out.in_mstar && out.history.size() >= 2) {
    const double prev = out.history[out.history.size() - 2].value;
    if (std::abs(last - prev) > tol * (1.0 + last)) {
      History h;
      for (const auto& s : out.history) h.emplace_back(s.l, s.value);
      throw NotConverged("Danilov tail still moving at the end of the schedule", std::move(h));
    }
  }
  return out;
}

}  // namespace weylap
