#include "weylap/translation.hpp"

#include "weylap/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace weylap {

const char* to_string(Convention c) {
  switch (c) {
    case Convention::classical: return "classical";
    case Convention::ursell: return "ursell";
    case Convention::bohr: return "bohr";
  }
  return "?";
}

const char* to_string(ApClass c) {
  switch (c) {
    case ApClass::bohr: return "bohr";
    case ApClass::stepanov: return "stepanov";
    case ApClass::weyl: return "weyl";
    case ApClass::unresolved: return "unresolved";
  }
  return "?";
}

std::vector<double> TauGrid::points() const {
  if (!std::isfinite(min) || !std::isfinite(max) || min > max)
    throw EmptyRange("tau range must satisfy min <= max");
  if (!(step > 0.0)) throw EmptyRange("tau step must be positive");
  const auto count = static_cast<long long>(std::floor((max - min) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) {
    double tau = min + static_cast<double>(i) * step;
    if (std::abs(tau) < 1e-9 * step) tau = 0.0;
    out.push_back(tau);
  }
  return out;
}

bool TranslationSet::accepts(double tau) const {
  return std::any_of(accepted.begin(), accepted.end(),
                     [tau](const AcceptedTau& a) { return a.tau == tau; });
}

double translation_distance(const Signal& f, double tau, double p, double l, Convention convention,
                            const ScanSpec& scan) {
  switch (convention) {
    case Convention::classical:
      return stepanov_distance(f.shifted(tau), f, p, l, scan).value;
    case Convention::ursell: {
      ScanSpec origin = scan;
      origin.xi_min = 0.0;
      origin.xi_max = 0.0;
      return stepanov_distance(f.shifted(tau), f, p, l, origin).value;
    }
    case Convention::bohr: {
      scan.validate();
      const double h = 1.0 / scan.quad_points_per_unit;
      const auto count = std::max<long long>(
          1, static_cast<long long>(std::ceil((scan.xi_max - scan.xi_min) / h - 1e-9)));
      std::vector<double> gaps(static_cast<std::size_t>(count));
      parallel_for(gaps.size(), [&](std::size_t i) {
        const double t = scan.xi_min + (static_cast<double>(i) + 0.5) * h;
        Vec a(f.dim()), b(f.dim());
        f.eval(t + tau, a);
        f.eval(t, b);
        gaps[i] = (a - b).norm();
      });
      return *std::max_element(gaps.begin(), gaps.end());
    }
  }
  return 0.0;
}

TranslationSet scan_translations(const Signal& f, const TranslationQuery& query) {
  if (!(query.eps > 0.0)) throw InvalidArgument("eps must be positive");
  if (!(query.dense_fraction > 0.0 && query.dense_fraction <= 1.0))
    throw InvalidArgument("dense_fraction must lie in (0, 1]");
  if (!(query.tau.min < query.tau.max)) throw EmptyRange("tau range must satisfy min < max");
  const auto taus = query.tau.points();

  std::vector<double> dist(taus.size());
  parallel_for(taus.size(), [&](std::size_t i) {
    dist[i] = translation_distance(f, taus[i], query.p, query.l, query.convention, query.scan);
  });

  TranslationSet set;
  set.range = query.tau;
  set.convention = query.convention;
  set.eps = query.eps;
  set.p = query.p;
  set.l = query.l;
  set.landscape.reserve(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) {
    set.landscape.emplace_back(taus[i], dist[i]);
    // Strict: a zero margin is a rejection.
    if (dist[i] < query.eps)
      set.accepted.push_back({taus[i], query.eps - dist[i]});
    else
      ++set.rejected_count;
  }

  const double span = query.tau.max - query.tau.min;
  if (set.accepted.empty()) {
    set.max_gap = span;
    set.density_bound_k = kInf;
    return set;
  }
  double gap = std::max(set.accepted.front().tau - query.tau.min, query.tau.max - set.accepted.back().tau);
  for (std::size_t i = 1; i < set.accepted.size(); ++i)
    gap = std::max(gap, set.accepted[i].tau - set.accepted[i - 1].tau);
  set.max_gap = gap;
  set.density_bound_k = gap <= query.dense_fraction * span ? gap : kInf;
  return set;
}

Classification classify(const Signal& f, double eps, double p, const ClassifyPolicy& policy) {
  TranslationQuery q;
  q.eps = eps;
  q.p = p;
  q.tau = policy.tau;
  q.scan = policy.scan;
  q.dense_fraction = policy.dense_fraction;

  Classification out;
  q.convention = Convention::bohr;
  q.l = policy.stepanov_window;
  out.bohr_set = scan_translations(f, q);
  out.bohr = out.bohr_set.relatively_dense();

  q.convention = Convention::classical;
  q.l = policy.stepanov_window;
  out.stepanov_set = scan_translations(f, q);
  out.stepanov = out.stepanov_set.relatively_dense();

  for (double l : policy.weyl_windows) {
    q.l = l;
    out.weyl_sets.push_back(scan_translations(f, q));
    if (out.weyl_sets.back().relatively_dense()) {
      out.weyl = true;
      out.weyl_window = l;
      break;
    }
  }

  if (out.bohr)
    out.label = ApClass::bohr;
  else if (out.stepanov)
    out.label = ApClass::stepanov;
  else if (out.weyl)
    out.label = ApClass::weyl;
  else
    out.label = ApClass::unresolved;
  return out;
}

UrsellAgreement ursell_agreement(const Signal& f, double eps, double p, double l, const TauGrid& tau,
                                 const ScanSpec& scan) {
  TranslationQuery q;
  q.eps = eps;
  q.p = p;
  q.l = l;
  q.tau = tau;
  q.scan = scan;
  UrsellAgreement out;
  q.convention = Convention::classical;
  out.classical = scan_translations(f, q);
  q.convention = Convention::ursell;
  out.ursell = scan_translations(f, q);

  const auto& a = out.classical.landscape;
  const auto& b = out.ursell.landscape;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i].second < eps) == (b[i].second < eps))
      ++agree;
    else
      out.disagreements.push_back(a[i].first);
  }
  out.agree_fraction = a.empty() ? 1.0 : static_cast<double>(agree) / static_cast<double>(a.size());
  return out;
}

}  // namespace weylap
