#include "weylap/evolution.hpp"

#include "weylap/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

namespace weylap {

namespace {

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGaussX{-0.9061798459386640, -0.5384693101056831, 0.0,
                                        0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGaussW{0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                        0.4786286704993665, 0.2369268850561891};

void require_stable(const Semigroup& S) {
  const auto check = verify_stability(S);
  if (!check.ok) {
    std::ostringstream msg;
    msg << "declared envelope M=" << S.M() << ", delta=" << S.delta() << " is violated: |T(t)| / (M e^{-delta t}) = "
        << check.worst_ratio << " at t=" << check.worst_t;
    throw StabilityViolation(msg.str());
  }
}

std::vector<double> sorted_breaks(const std::vector<double>& raw) {
  std::vector<double> out = raw;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct Cells {
  std::vector<double> mid;
  std::vector<double> width;
};

// Cells of the lattice h Z restricted to [a, b], additionally cut at breaks.
Cells lattice_cells(double a, double b, double h, const std::vector<double>& breaks) {
  std::vector<double> edges{a, b};
  const double tiny = 1e-9 * h;
  const auto k_lo = static_cast<long long>(std::ceil(a / h));
  const auto k_hi = static_cast<long long>(std::floor(b / h));
  for (long long k = k_lo; k <= k_hi; ++k) {
    const double x = static_cast<double>(k) * h;
    if (x > a + tiny && x < b - tiny) edges.push_back(x);
  }
  for (double x : breaks)
    if (x > a + tiny && x < b - tiny) edges.push_back(x);
  std::sort(edges.begin(), edges.end());
  Cells cells;
  double left = edges.front();
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i] - left <= tiny) continue;
    cells.mid.push_back(0.5 * (left + edges[i]));
    cells.width.push_back(edges[i] - left);
    left = edges[i];
  }
  return cells;
}

// sum_i T(t - mid_i) w_i f(mid_i) by the midpoint rule.
Vec midpoint_convolution(const Semigroup& S, const Signal& f, double t, const Cells& cells) {
  const int n = f.dim();
  std::vector<Vec> weighted(cells.mid.size());
  parallel_for(weighted.size(), [&](std::size_t i) {
    Vec v(n);
    f.eval(cells.mid[i], v);
    weighted[i] = cells.width[i] * v;
  });
  Vec acc = Vec::Zero(n);
  if (weighted.empty()) return acc;
  if (S.kind() != SemigroupKind::dense) {
    for (std::size_t i = 0; i < weighted.size(); ++i) acc += S.apply(t - cells.mid[i], weighted[i]);
    return acc;
  }
  // Horner form: acc <- T(gap) acc + w_i f_i, then T(t - last mid).
  std::map<long long, Mat> gap_cache;
  auto kernel = [&](double gap) -> const Mat& {
    const long long key = std::llround(std::ldexp(gap, 40));
    auto it = gap_cache.find(key);
    if (it == gap_cache.end()) it = gap_cache.emplace(key, S.matrix(gap)).first;
    return it->second;
  };
  acc = weighted.front();
  for (std::size_t i = 1; i < weighted.size(); ++i) {
    const Vec prev = kernel(cells.mid[i] - cells.mid[i - 1]) * acc;
    acc = prev + weighted[i];
  }
  return S.matrix(t - cells.mid.back()) * acc;
}

struct Truncation {
  double lower = 0.0;
  double tail_bound = 0.0;
  double stepanov = 0.0;
  bool empty = false;  // f vanishes on (-inf, t]
};

Truncation choose_truncation(const Semigroup& S, const Signal& f, double t, const LinearOptions& o) {
  Truncation out;
  const auto edge = f.left_edge();
  if (edge && *edge >= t) {
    out.empty = true;
    out.lower = t;
    return out;
  }
  const double M = S.M();
  const double d = S.delta();
  const double geometric = 1.0 / (-std::expm1(-d));
  auto measure = [&](double lo) {
    ScanSpec scan{lo, t - 1.0, 0.05, o.density};
    return stepanov_norm(f, o.p, 1.0, scan).value;
  };
  auto width = [&](double bound) {
    if (bound <= 0.0) return 0.0;
    return std::max(0.0, std::log(M * bound * geometric / o.tail_tol) / d);
  };
  double bound = o.stepanov_bound ? *o.stepanov_bound : measure(t - 11.0);
  if (!o.stepanov_bound) {
    for (int it = 0; it < 8; ++it) {
      const double wider = measure(t - width(bound) - 10.0);
      if (wider <= bound) break;
      bound = wider;
    }
  }
  const double W = width(bound);
  out.stepanov = bound;
  out.lower = t - W;
  out.tail_bound = M * bound * geometric * std::exp(-d * W);
  if (edge && *edge >= out.lower) {
    out.lower = *edge;
    out.tail_bound = 0.0;
  }
  return out;
}

LinearValue linear_value_unchecked(const Semigroup& S, const Signal& f, double t, const LinearOptions& o) {
  LinearValue out;
  const auto cut = choose_truncation(S, f, t, o);
  out.lower = cut.lower;
  out.tail_bound = cut.tail_bound;
  out.stepanov_bound = cut.stepanov;
  if (cut.empty) {
    out.value = Vec::Zero(f.dim());
    return out;
  }
  std::vector<double> raw;
  f.breakpoints(cut.lower, t, raw);
  const auto breaks = sorted_breaks(raw);
  const double h = 1.0 / o.density;
  const Vec fine = midpoint_convolution(S, f, t, lattice_cells(cut.lower, t, h, breaks));
  const Vec coarse = midpoint_convolution(S, f, t, lattice_cells(cut.lower, t, 2.0 * h, breaks));
  out.value = fine;
  out.quad_tol = (fine - coarse).norm() + 1e-14 * (1.0 + fine.norm());
  return out;
}

void validate(const LinearOptions& o) {
  if (!(o.tail_tol > 0.0)) throw InvalidArgument("tail_tol must be positive");
  if (o.density < 16) throw InvalidArgument("quadrature density must be >= 16 points per unit");
  if (!(o.p >= 1.0)) throw InvalidExponent("exponent p must be >= 1");
  if (o.stepanov_bound && !(*o.stepanov_bound >= 0.0))
    throw InvalidArgument("stepanov bound must be nonnegative");
}

double sup_diff(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, (a[i] - b[i]).norm());
  return r;
}

// Kernel applications for the Picard sweep. Regular cells of width h reuse
// precomputed matrices; anything else is evaluated directly.
class SweepKernel {
 public:
  SweepKernel(const Semigroup& S, double h) : S_(S), h_(h) {
    if (S.kind() == SemigroupKind::dense) {
      step_ = S.matrix(h);
      for (std::size_t j = 0; j < kGaussX.size(); ++j) nodes_[j] = S.matrix(0.5 * h * (1.0 - kGaussX[j]));
    }
  }

  bool regular(double width) const { return std::abs(width - h_) <= 1e-12 * h_; }

  Vec step(double width, const Vec& x) const {
    if (S_.kind() == SemigroupKind::dense && regular(width)) return step_ * x;
    return S_.apply(width, x);
  }

  Vec node(std::size_t j, double width, double offset, const Vec& x) const {
    if (S_.kind() == SemigroupKind::dense && regular(width)) return nodes_[j] * x;
    return S_.apply(offset, x);
  }

 private:
  const Semigroup& S_;
  double h_;
  Mat step_;
  std::array<Mat, 5> nodes_;
};

// int_{a}^{b} T(right - s) f(s, u(s)) ds by GL5, u linear between (ta, ua) and (tb, ub).
Vec local_integral(const ParametricSignal& f, const Semigroup& S, double a, double b, double right, double ta,
                   double tb, const Vec& ua, const Vec& ub) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  Vec acc = Vec::Zero(f.dim());
  Vec g(f.dim());
  for (std::size_t j = 0; j < kGaussX.size(); ++j) {
    const double s = mid + half * kGaussX[j];
    const double theta = (s - ta) / (tb - ta);
    const Vec u = (1.0 - theta) * ua + theta * ub;
    f.eval(s, u, g);
    acc += (kGaussW[j] * half) * S.apply(right - s, g);
  }
  return acc;
}

struct Sweep {
  const Semigroup& S;
  const ParametricSignal& f;
  const std::vector<double>& grid;
  std::vector<double> breaks;
  SweepKernel kernel;
  int splits = 1;  // GL5 panels per cell

  Sweep(const Semigroup& S_, const ParametricSignal& f_, const std::vector<double>& grid_, double h)
      : S(S_), f(f_), grid(grid_), kernel(S_, h) {
    std::vector<double> raw;
    f.breakpoints(grid.front(), grid.back(), raw);
    breaks = sorted_breaks(raw);
  }

  Vec cell(std::size_t i, const std::vector<Vec>& u) const {
    const double ta = grid[i];
    const double tb = grid[i + 1];
    const double width = tb - ta;
    auto lo = std::upper_bound(breaks.begin(), breaks.end(), ta);
    auto hi = std::lower_bound(breaks.begin(), breaks.end(), tb);
    if (lo == hi && splits == 1) {
      Vec acc = Vec::Zero(f.dim());
      Vec g(f.dim());
      const double half = 0.5 * width;
      for (std::size_t j = 0; j < kGaussX.size(); ++j) {
        const double s = ta + half * (1.0 + kGaussX[j]);
        const double theta = 0.5 * (1.0 + kGaussX[j]);
        const Vec uj = (1.0 - theta) * u[i] + theta * u[i + 1];
        f.eval(s, uj, g);
        acc += (kGaussW[j] * half) * kernel.node(j, width, tb - s, g);
      }
      return acc;
    }
    std::vector<double> edges{ta};
    for (auto it = lo; it != hi; ++it) edges.push_back(*it);
    edges.push_back(tb);
    Vec acc = Vec::Zero(f.dim());
    for (std::size_t k = 1; k < edges.size(); ++k) {
      const double piece = (edges[k] - edges[k - 1]) / splits;
      for (int q = 0; q < splits; ++q) {
        const double a = edges[k - 1] + q * piece;
        const double b = q + 1 == splits ? edges[k] : a + piece;
        acc += local_integral(f, S, a, b, tb, ta, tb, u[i], u[i + 1]);
      }
    }
    return acc;
  }

  std::vector<Vec> operator()(const std::vector<Vec>& u) const {
    const std::size_t cells = grid.size() - 1;
    std::vector<Vec> local(cells);
    parallel_for(cells, [&](std::size_t i) { local[i] = cell(i, u); });
    std::vector<Vec> out(grid.size());
    out[0] = Vec::Zero(f.dim());
    for (std::size_t i = 0; i < cells; ++i) out[i + 1] = kernel.step(grid[i + 1] - grid[i], out[i]) + local[i];
    return out;
  }
};

double lipschitz_sup(const ParametricSignal& f, const ScanSpec& scan) {
  if (auto c = f.lipschitz_constant()) return std::abs(*c);
  const double h = 1.0 / scan.quad_points_per_unit;
  const auto count = static_cast<long long>(std::ceil((scan.xi_max - scan.xi_min + 1.0) / h));
  double best = 0.0;
  for (long long i = 0; i <= count; ++i)
    best = std::max(best, std::abs(f.lipschitz().scalar(scan.xi_min + static_cast<double>(i) * h)));
  return best;
}

}  // namespace

Vec MildSolution::at(double s) const {
  if (t.empty() || s < t.front() || s > t.back()) {
    std::ostringstream msg;
    msg << "time " << s << " outside the solution grid";
    throw InvalidArgument(msg.str());
  }
  auto it = std::upper_bound(t.begin(), t.end(), s);
  if (it == t.end()) return u.back();
  const auto i = static_cast<std::size_t>(it - t.begin());
  const double theta = (s - t[i - 1]) / (t[i] - t[i - 1]);
  return (1.0 - theta) * u[i - 1] + theta * u[i];
}

double MildSolution::sup_norm() const {
  double r = 0.0;
  for (const auto& v : u) r = std::max(r, v.norm());
  return r;
}

Signal MildSolution::as_signal() const { return Signal::sampled(t, u).with_label("mild_solution"); }

LinearValue linear_mild_solution(const Semigroup& S, const Signal& f, double t, const LinearOptions& options) {
  validate(options);
  if (f.dim() != S.dim()) throw DimensionMismatch("forcing dimension does not match the generator");
  if (!std::isfinite(t)) throw InvalidArgument("evaluation time must be finite");
  require_stable(S);
  return linear_value_unchecked(S, f, t, options);
}

MildSolution linear_mild_solution(const Semigroup& S, const Signal& f, const std::vector<double>& grid,
                                  const LinearOptions& options) {
  validate(options);
  if (f.dim() != S.dim()) throw DimensionMismatch("forcing dimension does not match the generator");
  if (grid.empty()) throw EmptyRange("solution grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw InvalidArgument("solution grid must be strictly increasing");
  require_stable(S);
  std::vector<LinearValue> values(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { values[i] = linear_value_unchecked(S, f, grid[i], options); });
  MildSolution out;
  out.t = grid;
  for (const auto& v : values) {
    out.u.push_back(v.value);
    out.tail_bound = std::max(out.tail_bound, v.tail_bound);
    out.quad_tol = std::max(out.quad_tol, v.quad_tol);
  }
  return out;
}

double linear_solution_bound(const Semigroup& S, const Signal& f, double p, const ScanSpec& scan) {
  return S.M() * stepanov_norm(f, p, 1.0, scan).value / (-std::expm1(-S.delta()));
}

ContractionCheck contraction_constant(double M, double delta, double p, double normL) {
  if (!(M >= 1.0)) throw InvalidArgument("M must be >= 1");
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidExponent("exponent p must be a finite number >= 1");
  if (!(normL >= 0.0)) throw InvalidArgument("|L| must be nonnegative");
  double holder = M;
  if (p > 1.0) {
    const double q = p / (p - 1.0);
    holder = std::pow(std::pow(M, q) / (delta * q), 1.0 / q);
  }
  const double geometric = 1.0 / (-std::expm1(-delta));  // e^d / (e^d - 1)
  ContractionCheck out;
  out.threshold = 1.0 / (holder * geometric);
  out.k = normL / out.threshold;
  out.satisfied_13 = normL < out.threshold;
  return out;
}

WeylCondition weyl_condition_check(double M, double delta, double p, double normL) {
  if (!(p >= 2.0) || !std::isfinite(p)) throw InvalidExponent("the Weyl conditions need p >= 2");
  if (!(M >= 1.0)) throw InvalidArgument("M must be >= 1");
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  if (!(normL >= 0.0)) throw InvalidArgument("|L| must be nonnegative");
  WeylCondition out;
  const double pd = p * delta;
  if (p == 2.0) {
    out.bound = pd / (8.0 * M * M) * -std::expm1(-2.0 * delta / 4.0);
  } else {
    out.bound = pd / (std::pow(M, p) * std::pow(2.0, p + 1.0)) * -std::expm1(-pd / 4.0) *
                std::pow(pd / (2.0 * p - 4.0), p - 2.0);
  }
  out.satisfied = normL < out.bound;
  return out;
}

std::vector<Vec> apply_gamma(const Semigroup& S, const ParametricSignal& f, const std::vector<double>& grid,
                             const std::vector<Vec>& values) {
  if (grid.size() < 2 || grid.size() != values.size()) throw InvalidArgument("need >= 2 grid points with values");
  if (f.dim() != S.dim()) throw DimensionMismatch("forcing dimension does not match the generator");
  const Sweep sweep(S, f, grid, grid[1] - grid[0]);
  return sweep(values);
}

MildSolution picard_solve(const Semigroup& S, const ParametricSignal& f, const PicardOptions& o) {
  if (!(o.t0 < o.t1)) throw EmptyRange("picard range must satisfy t0 < t1");
  if (!(o.step > 0.0)) throw InvalidArgument("grid step must be positive");
  if (!(o.tail_tol > 0.0) || !(o.res_tol > 0.0)) throw InvalidArgument("tolerances must be positive");
  if (o.max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
  if (!(o.p >= 1.0)) throw InvalidExponent("exponent p must be >= 1");
  if (f.dim() != S.dim()) throw DimensionMismatch("forcing dimension does not match the generator");
  o.scan.validate();
  require_stable(S);

  const bool constant_L = f.lipschitz_constant().has_value();
  if (!constant_L && o.p < 2.0)
    throw InvalidExponent("a time-dependent Lipschitz bound needs p >= 2");
  const double normL = constant_L ? std::abs(*f.lipschitz_constant())
                                  : stepanov_norm(f.lipschitz(), o.p, 1.0, o.scan).value;
  const auto cc = contraction_constant(S.M(), S.delta(), o.p, normL);
  if (!cc.satisfied_13) {
    std::ostringstream msg;
    msg << "|L| = " << normL << " is not below the contraction threshold " << cc.threshold << " (k = " << cc.k << ")";
    throw NotAContraction(msg.str());
  }

  // History length: the error from starting at zero decays like
  // M U exp(-(delta - M Lmax) W), U a bound on sup |u|.
  const double M = S.M();
  const double d = S.delta();
  const double forcing = stepanov_norm(f.at_zero(), 1.0, 1.0, o.scan).value;
  const double U = M * forcing / (-std::expm1(-d)) / (1.0 - cc.k);
  double rate = d - M * lipschitz_sup(f, o.scan);
  if (rate <= 0.0) rate = d * (1.0 - cc.k);
  const double W = U > 0.0 ? std::max(0.0, std::log(M * U / o.tail_tol) / rate) : 0.0;

  const auto cells_out = static_cast<long long>(std::ceil((o.t1 - o.t0) / o.step - 1e-9));
  const double h = (o.t1 - o.t0) / static_cast<double>(cells_out);
  const auto cells_back = static_cast<long long>(std::ceil(W / h));
  std::vector<double> grid(static_cast<std::size_t>(cells_back + cells_out + 1));
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid[i] = o.t0 + static_cast<double>(static_cast<long long>(i) - cells_back) * h;
  grid.back() = o.t1;

  Sweep sweep(S, f, grid, h);
  std::vector<Vec> u(grid.size(), Vec::Zero(f.dim()));
  PicardInfo info;
  info.k_bound = cc.k;
  bool converged = false;
  for (int m = 0; m < o.max_iter; ++m) {
    auto next = sweep(u);
    const double r = sup_diff(next, u);
    info.residuals.push_back(r);
    u = std::move(next);
    if (r <= o.res_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "Picard iteration did not reach residual " << o.res_tol << " in " << o.max_iter << " sweeps";
    throw MaxIterExceeded(msg.str(), info.residuals);
  }
  info.iterations = std::max(1, static_cast<int>(info.residuals.size()) - 1);
  for (std::size_t m = 1; m < info.residuals.size(); ++m)
    if (info.residuals[m - 1] > 0.0)
      info.k_estimate = std::max(info.k_estimate, info.residuals[m] / info.residuals[m - 1]);

  // Quadrature check: the same sweep with every cell split in two.
  sweep.splits = 2;
  const auto refined = sweep(u);

  MildSolution out;
  const auto first = static_cast<std::size_t>(cells_back);
  out.t.assign(grid.begin() + static_cast<long long>(first), grid.end());
  out.u.assign(u.begin() + static_cast<long long>(first), u.end());
  double quad = 0.0;
  for (std::size_t i = first; i < grid.size(); ++i) quad = std::max(quad, (refined[i] - u[i]).norm());
  out.quad_tol = quad + 1e-14;
  out.tail_bound = U > 0.0 ? M * U * std::exp(-rate * static_cast<double>(cells_back) * h) : 0.0;
  out.picard = std::move(info);
  return out;
}

double gronwall_bound(double alpha, const std::vector<double>& betas, const std::vector<double>& deltas) {
  if (!(alpha >= 0.0)) throw InvalidArgument("alpha must be nonnegative");
  double beta = 0.0;
  for (double b : betas) {
    if (!(b >= 0.0)) throw InvalidArgument("betas must be nonnegative");
    beta += b;
  }
  for (double d : deltas)
    if (!(d > 0.0)) throw InvalidArgument("deltas must be positive");
  if (betas.empty()) return alpha;
  if (deltas.empty()) throw HypothesisViolated("no decay rate given for a nonzero beta");
  const double delta = *std::min_element(deltas.begin(), deltas.end());
  if (!(delta > beta)) throw HypothesisViolated("need min(deltas) > sum(betas)");
  return alpha * delta / (delta - beta);
}

TranslationDiagnostic translation_diagnostic(const ParametricSignal& f, const MildSolution* u, double tau,
                                             double p, double l, double delta1, double gamma,
                                             const DiagnosticOptions& options) {
  if (!(delta1 > 0.0) || !(gamma > 0.0)) throw InvalidArgument("delta1 and gamma must be positive");
  if (!(p >= 1.0)) throw InvalidExponent("exponent p must be >= 1");
  if (!(l > 0.0)) throw InvalidArgument("window length l must be positive");
  if (!(options.tail_tol > 0.0)) throw InvalidArgument("tail_tol must be positive");
  if (options.density < 16) throw InvalidArgument("quadrature density must be >= 16 points per unit");
  const bool needs_u = !(f.lipschitz_constant() && *f.lipschitz_constant() == 0.0);
  if (needs_u && u == nullptr) throw InvalidArgument("f depends on u but no solution was supplied");
  if (u != nullptr && u->dim() != f.dim()) throw DimensionMismatch("solution and forcing dimensions differ");

  const int n = std::max(1, static_cast<int>(std::ceil(l * options.density - 1e-9)));
  const double c = l / n;
  const double slow = std::min(delta1, gamma);

  auto evaluate = [&](double horizon) {
    if (needs_u && (u->t.front() > -horizon || u->t.back() < l)) {
      std::ostringstream msg;
      msg << "solution grid must cover [" << -horizon << ", " << l << "]";
      throw InvalidArgument(msg.str());
    }
    const auto back = static_cast<long long>(std::ceil(horizon / c));
    // Cell k covers [(k - back) c, (k - back + 1) c].
    const auto cell_count = static_cast<std::size_t>(back + n);
    std::vector<double> g(cell_count);
    parallel_for(cell_count, [&](std::size_t k) {
      const double t = (static_cast<double>(static_cast<long long>(k) - back) + 0.5) * c;
      const Vec state = needs_u ? u->at(t) : Vec::Zero(f.dim());
      Vec a(f.dim()), b(f.dim());
      f.eval(t + tau, state, a);
      f.eval(t, state, b);
      g[k] = detail::norm_pow(a - b, p);
    });
    // h at s_j = (j - back) c, j = 0..back.
    std::vector<double> h(static_cast<std::size_t>(back + 1));
    long double sum = 0.0L;
    for (int i = 0; i < n; ++i) sum += g[static_cast<std::size_t>(i)];
    h[0] = static_cast<double>(sum / n);
    for (std::size_t j = 1; j < h.size(); ++j) {
      sum += g[j - 1 + static_cast<std::size_t>(n)];
      sum -= g[j - 1];
      h[j] = std::max(0.0, static_cast<double>(sum / n));
    }
    TranslationDiagnostic out;
    out.horizon = static_cast<double>(back) * c;
    const double decay = std::exp(-delta1 * c);
    double H = 0.0;
    double hmax = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) {
      const double s = (static_cast<double>(static_cast<long long>(j) - back)) * c;
      if (j > 0) H = decay * H + 0.5 * c * (decay * h[j - 1] + h[j]);
      const double w = (j == 0 || j + 1 == h.size()) ? 0.5 * c : c;
      out.alpha0 += w * std::exp(delta1 * s) * h[j];
      out.weighted += w * std::exp(gamma * s) * H;
      hmax = std::max(hmax, h[j]);
    }
    const double S = out.horizon;
    out.tail_bound = hmax * (std::exp(-delta1 * S) / delta1 + std::exp(-gamma * S) / (gamma * delta1) +
                             S * std::exp(-slow * S) / delta1);
    return out;
  };

  double horizon = 10.0 / slow + l;
  auto result = evaluate(horizon);
  for (int it = 0; it < 10 && result.tail_bound > options.tail_tol; ++it) {
    horizon += std::log(result.tail_bound / options.tail_tol) / slow + 1.0;
    result = evaluate(horizon);
  }
  return result;
}

}  // namespace weylap
