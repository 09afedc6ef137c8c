#include "weylap/verify.hpp"

#include "weylap/evolution.hpp"
#include "weylap/report.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace weylap {

using nlohmann::json;

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void VerificationReport::near(std::string description, double measured, double target, double tol) {
  checks.push_back({std::move(description), "near", measured, target, tol, std::abs(measured - target) <= tol});
}

void VerificationReport::at_most(std::string description, double measured, double bound, double tol) {
  checks.push_back({std::move(description), "le", measured, bound, tol, measured <= bound + tol});
}

void VerificationReport::at_least(std::string description, double measured, double bound, double tol) {
  checks.push_back({std::move(description), "ge", measured, bound, tol, measured >= bound - tol});
}

void VerificationReport::flag(std::string description, bool value, bool expected) {
  checks.push_back({std::move(description), "flag", value ? 1.0 : 0.0, expected ? 1.0 : 0.0, 0.0, value == expected});
}

json to_json(const VerificationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"description", c.description},
                      {"relation", c.relation},
                      {"measured", number(c.measured)},
                      {"target", number(c.target)},
                      {"tol", number(c.tol)},
                      {"pass", c.pass}});
  return {{"case_id", r.case_id}, {"passed", r.passed()}, {"checks", checks}, {"notes", r.notes},
          {"artifacts", r.artifacts}};
}

Signal paper_step() { return Signal::unit_pulse(); }

Signal paper_primitive() { return Signal::primitive(Signal::unit_pulse(), std::nullopt).with_label("F"); }

Signal paper_solution() { return relaxed_unit_pulse().with_label("x"); }

namespace {

const double kSqrtE = std::sqrt(std::exp(1.0));

double closed_form_x(double t) {
  if (t <= 0.0) return 0.0;
  if (t < 0.5) return 1.0 - std::exp(-t);
  return (kSqrtE - 1.0) * std::exp(-t);
}

ClassifyPolicy ladder_policy() {
  ClassifyPolicy policy;
  policy.scan = ScanSpec{-25.0, 5.0, 0.05, 256};
  policy.tau = TauGrid{0.0, 20.0, 0.1};
  policy.weyl_windows = WindowSchedule{1.0, 2.0, 9}.windows();
  return policy;
}

ClassifyPolicy periodic_policy() {
  ClassifyPolicy policy;
  policy.scan = ScanSpec{-5.0, 5.0, 0.05, 256};
  policy.tau = TauGrid{0.0, 40.0, 0.05};
  policy.weyl_windows = WindowSchedule{1.0, 2.0, 9}.windows();
  return policy;
}

Table landscape_table(const TranslationSet& s) {
  Table t{{"tau", "distance"}, {}};
  for (const auto& [tau, d] : s.landscape) t.rows.push_back({tau, d});
  return t;
}

const TranslationSet* first_dense(const Classification& c) {
  if (c.bohr) return &c.bohr_set;
  if (c.stepanov) return &c.stepanov_set;
  for (const auto& s : c.weyl_sets)
    if (s.relatively_dense()) return &s;
  return nullptr;
}

}  // namespace

VerificationReport verify_example1(const VerifyConfig& config) {
  VerificationReport report;
  report.case_id = "example1_primitive";
  const Signal F = paper_primitive();

  // (a) sup |F| on a probe grid.
  double sup = 0.0;
  for (int i = 0; i <= 15 * 256; ++i) sup = std::max(sup, std::abs(F.scalar(-5.0 + i / 256.0)));
  report.near("sup |F| on [-5, 10]", sup, 0.5, 1e-9);

  // (b) 1-Lipschitz on random pairs.
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> pick(-2.0, 3.0);
  double worst = 0.0;
  for (int i = 0; i < config.probes; ++i) {
    const double a = pick(rng);
    const double b = pick(rng);
    if (a == b) continue;
    worst = std::max(worst, std::abs(F.scalar(a) - F.scalar(b)) / std::abs(a - b));
  }
  report.at_most("max |F(t1) - F(t2)| / |t1 - t2| over random pairs", worst, 1.0, 1e-12);

  // (c) non-Bohr witness at eps = 0.2: some t in [0, 1/4] separates every tau > 1/4.
  double weakest = kInf;
  for (double tau = 0.3; tau <= 20.0 + 1e-12; tau += 0.05) {
    double best = 0.0;
    for (int k = 0; k <= 64; ++k) {
      const double t = 0.25 * k / 64.0;
      best = std::max(best, std::abs(F.scalar(t + tau) - F.scalar(t)));
    }
    weakest = std::min(weakest, best);
  }
  report.at_least("min over tau in [0.3, 20] of max over t in [0, 1/4] of |F(t+tau) - F(t)|", weakest, 0.25);
  report.near("|F(10) - F(0)|", std::abs(F.scalar(10.0) - F.scalar(0.0)), 0.5, 1e-15);

  // (d) Weyl evidence.
  const ScanSpec wide{-25.0, 5.0, 0.05, 256};
  const double d5 = translation_distance(F, 5.0, 1.0, 100.0, Convention::classical, wide);
  report.near("S^1_100 distance between F(. + 5) and F", d5, 0.025, 1e-9);
  report.notes.push_back(
      "|F(t + tau) - F(t)| equals 1/2 on an interval of length |tau| - 1/2, so the S^1_l distance is about "
      "min(|tau|, l) / (2 l); acceptance of every tau in [0, 20] at eps = 0.1 needs l > 100.");

  const auto c = classify(F, 0.1, 1.0, ladder_policy());
  report.flag("F is not Bohr almost periodic on the probed range", c.bohr, false);
  report.flag("F is not Stepanov almost periodic on the probed range", c.stepanov, false);
  report.flag("F is Weyl almost periodic on the probed range", c.weyl, true);
  report.at_least("first Weyl window", c.weyl_window, 10.0);
  if (c.weyl) {
    const auto& set = c.weyl_sets.back();
    report.near("fraction of probed tau accepted at the Weyl window",
                static_cast<double>(set.accepted.size()) / static_cast<double>(set.landscape.size()), 1.0, 0.0);
    report.tables["example1_weyl_landscape"] = landscape_table(set);
  }
  report.tables["example1_bohr_landscape"] = landscape_table(c.bohr_set);
  report.artifacts["classification"] = to_json(c);
  report.artifacts["classification"]["label"] = to_string(c.label);
  return report;
}

VerificationReport verify_example2(const VerifyConfig&) {
  VerificationReport report;
  report.case_id = "example2_relaxation";
  const Signal x = paper_solution();
  const Signal f = paper_step();
  const auto S = Semigroup::scalar(-1.0);

  report.near("x(1/2)", x.scalar(0.5), 1.0 - std::exp(-0.5), 1e-14);
  report.near("x(-1)", x.scalar(-1.0), 0.0, 0.0);
  report.near("x(2)", x.scalar(2.0), (kSqrtE - 1.0) * std::exp(-2.0), 1e-15);

  // (a) quadrature against the closed form at three settings.
  const std::vector<double> grid{-1.0, 0.25, 0.5, 1.0, 2.0, 5.0};
  struct Setting {
    double tail_tol;
    int density;
  };
  const std::vector<Setting> settings{{1e-4, 64}, {1e-5, 128}, {1e-6, 256}};
  std::vector<double> errors;
  Table table{{"t", "closed_form", "tail_tol", "density", "computed", "error", "budget"}, {}};
  for (const auto& s : settings) {
    LinearOptions o;
    o.tail_tol = s.tail_tol;
    o.density = s.density;
    double worst = 0.0;
    double budget = 0.0;
    for (double t : grid) {
      const auto v = linear_mild_solution(S, f, t, o);
      const double err = std::abs(v.value(0) - closed_form_x(t));
      worst = std::max(worst, err);
      budget = std::max(budget, v.tail_bound + v.quad_tol);
      table.rows.push_back({t, closed_form_x(t), s.tail_tol, static_cast<double>(s.density), v.value(0), err,
                            v.tail_bound + v.quad_tol});
    }
    errors.push_back(worst);
    const std::string tag = "tail_tol=" + json(s.tail_tol).dump() + ", density=" + std::to_string(s.density);
    report.at_most("max |u - x| on the grid within tail_bound + quad_tol (" + tag + ")", worst, budget);
    report.at_most("tail_bound + quad_tol <= 1e-4 (" + tag + ")", budget, 1e-4);
  }
  report.at_most("error at the tightest setting does not exceed the loosest", errors.back(), errors.front());
  report.tables["example2_quadrature"] = table;

  // (b) non-Bohr witness: x decays, so |x(1/2) - x(1/2 + tau)| -> x(1/2) > 0.3.
  double weakest = kInf;
  for (double tau = 10.0; tau <= 50.0 + 1e-12; tau += 0.5)
    weakest = std::min(weakest, std::abs(x.scalar(0.5) - x.scalar(0.5 + tau)));
  report.at_least("min over tau in [10, 50] of |x(1/2) - x(1/2 + tau)|", weakest, 0.3);
  report.notes.push_back(
      "Non-Bohr witness: eps = 0.3 < x(1/2) = 1 - e^{-1/2} ~ 0.3935. The constant "
      "eps = sqrt(e) / (2 (sqrt(e) - 1)) ~ 1.27 exceeds sup |x| and cannot act as a witness; "
      "note (sqrt(e) - 1) / sqrt(e) = 1 / (2 eps), which suggests an inverted constant.");

  // (c) purely Weyl.
  const auto c = classify(x, 0.1, 1.0, ladder_policy());
  report.flag("x is not Bohr almost periodic on the probed range", c.bohr, false);
  report.flag("x is not Stepanov almost periodic on the probed range", c.stepanov, false);
  report.flag("x is Weyl almost periodic on the probed range", c.weyl, true);
  report.tables["example2_stepanov_landscape"] = landscape_table(c.stepanov_set);
  report.artifacts["classification"] = to_json(c);
  return report;
}

VerificationReport verify_superposition(const std::string& case_id, const ParametricSignal& f, const Signal& L,
                                        double r, const Signal& x, double q, double eps,
                                        const ClassifyPolicy& policy, const VerifyConfig& config) {
  if (!(q >= 1.0) || !(r >= 1.0)) throw ExponentMismatch("q and r must be >= 1");
  const double inv = 1.0 / q + 1.0 / r;
  if (inv > 1.0) throw ExponentMismatch("1/q + 1/r > 1 gives p < 1");
  if (inv == 0.0) throw ExponentMismatch("q = r = inf gives an infinite p");
  const double p = 1.0 / inv;
  if (L.dim() != 1) throw DimensionMismatch("Lipschitz bound must be scalar");
  if (x.dim() != f.dim()) throw DimensionMismatch("x and f have different dimensions");

  VerificationReport report;
  report.case_id = case_id;
  report.artifacts["p"] = number(p);

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> time(-10.0, 10.0);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  const int n = f.dim();
  double worst = 0.0;
  Vec u(n), v(n), fu(n), fv(n);
  for (int i = 0; i < config.probes; ++i) {
    const double t = time(rng);
    for (int k = 0; k < n; ++k) u(k) = coord(rng);
    for (int k = 0; k < n; ++k) v(k) = coord(rng);
    f.eval(t, u, fu);
    f.eval(t, v, fv);
    const double lhs = (fu - fv).norm();
    const double rhs = std::abs(L.scalar(t)) * (u - v).norm();
    if (rhs > 0.0)
      worst = std::max(worst, lhs / rhs);
    else if (lhs > 1e-12)
      worst = kInf;
  }
  report.at_most("max |f(t,u) - f(t,v)| / (L(t) |u - v|) over random triples", worst, 1.0, 1e-12);

  const Signal composed = Signal::compose(f, x);
  const auto c = classify(composed, eps, p, policy);
  report.flag("t -> f(t, x(t)) has a relatively dense eps-translation set", c.weyl, true);
  if (const auto* dense = first_dense(c)) {
    report.artifacts["max_gap"] = number(dense->max_gap);
    report.artifacts["dense_convention"] = to_string(dense->convention);
    report.artifacts["dense_window"] = number(dense->l);
    report.tables[case_id + "_landscape"] = landscape_table(*dense);
  }
  report.artifacts["classification"] = to_json(c);
  return report;
}

VerificationReport verify_ursell_suite(const VerifyConfig&) {
  VerificationReport report;
  report.case_id = "ursell_equivalence";
  const ScanSpec scan{-25.0, 5.0, 0.25, 128};
  const TauGrid tau{-20.0, 20.0, 0.25};
  const double l = 200.0;
  const std::vector<std::pair<std::string, Signal>> corpus{
      {"sin", Signal::sine()},
      {"constant", Signal::constant(1.0)},
      {"step", paper_step()},
      {"F", paper_primitive()},
      {"x", paper_solution()}};
  Table table{{"tau", "classical", "ursell"}, {}};
  for (const auto& [name, f] : corpus) {
    const auto a = ursell_agreement(f, 0.1, 1.0, l, tau, scan);
    report.at_least("agreement fraction for " + name, a.agree_fraction, name == "sin" ? 0.99 : 0.95);
    double worst = -kInf;
    for (std::size_t i = 0; i < a.classical.landscape.size(); ++i)
      worst = std::max(worst, a.ursell.landscape[i].second - a.classical.landscape[i].second);
    report.at_most("max (ursell - classical) distance for " + name, worst, 0.0, 1e-12);
    report.artifacts[name] = to_json(a);
    if (name == "F")
      for (std::size_t i = 0; i < a.classical.landscape.size(); ++i)
        table.rows.push_back(
            {a.classical.landscape[i].first, a.classical.landscape[i].second, a.ursell.landscape[i].second});
  }
  report.tables["ursell_F_landscape"] = table;
  return report;
}

std::vector<VerificationReport> verify_all(const VerifyConfig& config) {
  std::vector<VerificationReport> out;
  out.push_back(verify_example1(config));
  out.push_back(verify_example2(config));

  const auto sine = Signal::sine();
  const auto zero = Signal::zero();
  out.push_back(verify_superposition(
      "superposition_sin_sin", ParametricSignal::separable(zero, sine, 1.0, Nonlinearity::sine),
      Signal::magnitude(sine), 4.0, Signal::trig_sum({{1.0, 1.0, std::numbers::pi / 2}}).with_label("cos"), 4.0, 0.2,
      periodic_policy(), config));
  out.back().notes.push_back("sin(t) sin(cos t) is pi-periodic, so the accepted set clusters at multiples of pi.");
  out.push_back(verify_superposition("superposition_identity",
                                     ParametricSignal::separable(zero, Signal::constant(1.0), 1.0,
                                                                 Nonlinearity::identity),
                                     Signal::constant(1.0), 2.0, sine, 2.0, 0.2, periodic_policy(), config));
  out.push_back(verify_superposition("superposition_step", ParametricSignal::from_signal(paper_step()),
                                     Signal::constant(0.0), 2.0, sine, 2.0, 0.1, ladder_policy(), config));
  out.push_back(verify_ursell_suite(config));
  return out;
}

}  // namespace weylap
