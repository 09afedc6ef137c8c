#include "doctest.h"
#include "oracles.hpp"

#include "weylap/evolution.hpp"

#include <numbers>
#include <random>

using namespace weylap;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Mat mat2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_SUITE("evolution") {
  TEST_CASE("semigroup application") {
    CHECK(Semigroup::scalar(-1).apply(1.0, scalar_vec(1.0))(0) == Approx(std::exp(-1.0)).epsilon(1e-15));
    const auto d = Semigroup::diagonal({-1, -2});
    const Vec y = d.apply(std::log(2.0), vec2(1, 1));
    CHECK(y(0) == Approx(0.5).epsilon(1e-15));
    CHECK(y(1) == Approx(0.25).epsilon(1e-15));
    const auto dense = Semigroup::dense(mat2(-1, 10, 0, -1), 20, 0.5);
    const Vec x = vec2(0.3, -0.7);
    CHECK(dense.apply(0.0, x) == x);
    CHECK(d.apply(0.0, x) == x);
    CHECK_THROWS_AS(d.apply(-0.1, x), NegativeTime);
    CHECK_THROWS_AS(d.apply(1.0, scalar_vec(1.0)), DimensionMismatch);
  }

  TEST_CASE("dense exponential against the Jordan closed form") {
    // exp(t [[a, b], [0, a]]) = e^{at} [[1, b t], [0, 1]].
    const auto S = Semigroup::dense(mat2(-1.5, 4.0, 0.0, -1.5), 10, 1);
    for (double t : {0.01, 0.5, 2.0, 7.0}) {
      const Mat E = S.matrix(t);
      const double e = std::exp(-1.5 * t);
      CHECK(E(0, 0) == Approx(e).epsilon(1e-12));
      CHECK(E(0, 1) == Approx(4.0 * t * e).epsilon(1e-12));
      CHECK(std::abs(E(1, 0)) < 1e-14);
    }
    // A rotation-decay block: exp(t [[-a, w], [-w, -a]]) = e^{-at} R(wt).
    const auto R = Semigroup::dense(mat2(-0.5, 2.0, -2.0, -0.5), 1, 0.5);
    const Mat E = R.matrix(1.3);
    CHECK(E(0, 0) == Approx(std::exp(-0.65) * std::cos(2.6)).epsilon(1e-12));
    CHECK(E(0, 1) == Approx(std::exp(-0.65) * std::sin(2.6)).epsilon(1e-12));
    CHECK(R.norm(1.3) == Approx(std::exp(-0.65)).epsilon(1e-12));
  }

  TEST_CASE("semigroup constructors validate their input") {
    CHECK_THROWS_AS(Semigroup::scalar(0.0), InvalidArgument);
    CHECK_THROWS_AS(Semigroup::diagonal({-1, 0.5}), InvalidArgument);
    CHECK_THROWS_AS(Semigroup::diagonal(std::vector<double>(9, -1.0)), DimensionMismatch);
    CHECK_THROWS_AS(Semigroup::dense(mat2(-1, 0, 0, -1), 0.5, 1), InvalidArgument);
    const auto d = Semigroup::diagonal({-3, -0.5});
    CHECK(d.M() == 1.0);
    CHECK(d.delta() == 0.5);
  }

  TEST_CASE("stability envelopes") {
    const auto s = verify_stability(Semigroup::scalar(-1));
    CHECK(s.ok);
    CHECK(s.worst_ratio == Approx(1.0).epsilon(1e-15));
    CHECK_FALSE(verify_stability(Semigroup::dense(mat2(-1, 10, 0, -1), 1, 1)).ok);
    CHECK_FALSE(verify_stability(Semigroup::diagonal({-0.5}).with_envelope(1, 1)).ok);
    // A generous envelope for the Jordan block: |e^{tA}| <= e^{-t}(1 + 10t) <= 10 e^{-t/2}.
    CHECK(verify_stability(Semigroup::dense(mat2(-1, 10, 0, -1), 10, 0.5)).ok);
    CHECK_THROWS_AS(verify_stability(Semigroup::scalar(-1), {0.0, -1.0}), NegativeTime);
  }

  TEST_CASE("linear mild solution reproduces the relaxed pulse") {
    const auto S = Semigroup::scalar(-1);
    const auto v = linear_mild_solution(S, Signal::unit_pulse(), 1.0);
    CHECK(v.value(0) == Approx((oracle::kSqrtE - 1) / std::exp(1.0)).scale(1.0).epsilon(v.tail_bound + v.quad_tol + 1e-12));
    CHECK(std::abs(v.value(0) - 0.23865) < 1e-5);
    CHECK(v.tail_bound == 0.0);  // the pulse has a certified left edge
    CHECK(v.lower == 0.0);
    for (double t : {-1.0, 0.25, 0.5, 2.0, 5.0}) {
      const auto w = linear_mild_solution(S, Signal::unit_pulse(), t);
      CHECK(std::abs(w.value(0) - oracle::relaxed(t)) <= w.tail_bound + w.quad_tol + 1e-12);
      CHECK(w.tail_bound + w.quad_tol <= 1e-4);
    }
  }

  TEST_CASE("linear mild solution of zero and of sine") {
    const auto S = Semigroup::scalar(-1);
    const auto z = linear_mild_solution(S, Signal::zero(), 3.0);
    CHECK(z.value(0) == 0.0);
    CHECK(z.tail_bound <= 1e-6);
    const auto s = linear_mild_solution(S, Signal::sine(), 0.0);
    CHECK(s.tail_bound <= 1e-6);
    CHECK(s.lower < -10.0);
    const double tol = s.tail_bound + s.quad_tol;
    CHECK(std::abs(s.value(0) + 0.5) <= tol + 1e-12);
    // The truncated integral, by an independent quadrature, is within quad_tol.
    const double ref = oracle::simpson([](double r) { return std::exp(r) * std::sin(r); }, s.lower, 0.0);
    CHECK(std::abs(s.value(0) - ref) <= s.quad_tol);
  }

  TEST_CASE("linear mild solution rejects a false envelope") {
    const auto S = Semigroup::dense(mat2(-1, 10, 0, -1), 1, 1);
    CHECK_THROWS_AS(linear_mild_solution(S, Signal::zero(2), 1.0), StabilityViolation);
  }

  TEST_CASE("vector-valued linear solution") {
    const auto S = Semigroup::diagonal({-1, -2});
    Vec c(2);
    c << 1, 1;
    const auto v = linear_mild_solution(S, Signal::constant(c), 0.0);
    CHECK(v.value(0) == Approx(1.0).epsilon(1e-5));
    CHECK(v.value(1) == Approx(0.5).epsilon(1e-5));
  }

  TEST_CASE("grid solutions respect the boundedness certificate") {
    const auto S = Semigroup::scalar(-1);
    const ScanSpec scan{-5, 25, 0.05, 256};
    std::vector<double> grid;
    for (double t = 0; t <= 20.0 + 1e-9; t += 0.25) grid.push_back(t);
    const auto u = linear_mild_solution(S, Signal::sine(), grid);
    const double bound = linear_solution_bound(S, Signal::sine(), 1.0, scan);
    CHECK(u.sup_norm() <= bound + u.tail_bound + u.quad_tol);
    CHECK(u.at(10.0)(0) == Approx((std::sin(10.0) - std::cos(10.0)) / 2).epsilon(1e-6));
    CHECK_THROWS_AS(u.at(-1.0), InvalidArgument);
  }

  TEST_CASE("linear solution bound formula") {
    const ScanSpec scan{-5, 5, 0.01, 256};
    CHECK(linear_solution_bound(Semigroup::scalar(-1), Signal::unit_pulse(), 1.0, scan) ==
          Approx(0.5 / (1 - std::exp(-1.0))).epsilon(1e-6));
    CHECK(linear_solution_bound(Semigroup::scalar(-1), Signal::zero(), 1.0, scan) == 0.0);
    const auto S = Semigroup::scalar(-2).with_envelope(2, 2);
    CHECK(linear_solution_bound(S, Signal::constant(1.0), 1.0, scan) == Approx(2 / (1 - std::exp(-2.0))).epsilon(1e-12));
    CHECK(2 / (1 - std::exp(-2.0)) == Approx(2.31304).epsilon(1e-5));
  }

  TEST_CASE("contraction constant") {
    const auto c = contraction_constant(1, 1, 2, 0.5);
    const double e = std::exp(1.0);
    CHECK(c.k == Approx(std::sqrt(0.5) * e / (e - 1) * 0.5).epsilon(1e-15));
    CHECK(std::abs(c.k - 0.559313) < 1e-6);
    CHECK(c.satisfied_13);
    CHECK(c.threshold == Approx(std::sqrt(2.0) * (e - 1) / e).epsilon(1e-14));
    CHECK(contraction_constant(1, 1, 2, 0).k == 0.0);
    CHECK(contraction_constant(1, 1, 2, 0).satisfied_13);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      const auto b = contraction_constant(2, 0.7, p, contraction_constant(2, 0.7, p, 1).threshold);
      CHECK(b.k == 1.0);
      CHECK_FALSE(b.satisfied_13);
    }
    // p = 1: the Hoelder factor is M.
    CHECK(contraction_constant(3, 1, 1, 0.1).k == Approx(3 * e / (e - 1) * 0.1).epsilon(1e-14));
    CHECK_THROWS_AS(contraction_constant(1, 1, 0.5, 0.1), InvalidExponent);
  }

  TEST_CASE("weyl sufficient conditions") {
    const auto two = weyl_condition_check(1, 4, 2, 0.5);
    CHECK(two.bound == Approx(1 - std::exp(-2.0)).epsilon(1e-12));
    CHECK(std::abs(two.bound - (1 - std::exp(-2.0))) < 1e-9);
    CHECK(two.satisfied);
    const auto four = weyl_condition_check(1, 4, 4, 0.0);
    CHECK(four.bound == Approx(0.5 * (1 - std::exp(-4.0)) * 16).epsilon(1e-12));
    CHECK(std::abs(four.bound - 7.85346) < 2e-5);
    CHECK(four.satisfied);
    CHECK_FALSE(weyl_condition_check(1, 4, 2, 0.9).satisfied);
    CHECK_THROWS_AS(weyl_condition_check(1, 1, 1.5, 0.1), InvalidExponent);
  }

  TEST_CASE("picard with a u-independent forcing is the linear solution") {
    const auto f = ParametricSignal::from_signal(Signal::unit_pulse());
    PicardOptions o;
    o.t0 = -1;
    o.t1 = 5;
    o.step = 0.01;
    const auto u = picard_solve(Semigroup::scalar(-1), f, o);
    REQUIRE(u.picard);
    CHECK(u.picard->iterations == 1);
    for (std::size_t i = 0; i < u.t.size(); i += 25)
      CHECK(std::abs(u.u[i](0) - oracle::relaxed(u.t[i])) <= 1e-6 + u.tail_bound + u.quad_tol);
  }

  TEST_CASE("picard with zero forcing") {
    const auto f = ParametricSignal::from_signal(Signal::zero());
    const auto u = picard_solve(Semigroup::scalar(-1), f, {});
    CHECK(u.picard->iterations == 1);
    CHECK(u.sup_norm() == 0.0);
  }

  TEST_CASE("picard on the sine-coupled equation") {
    const auto f = ParametricSignal::separable(Signal::sine(), Signal::constant(1.0), 0.25, Nonlinearity::sine);
    PicardOptions o;
    o.t0 = 0;
    o.t1 = 10;
    o.step = 0.01;
    const auto u = picard_solve(Semigroup::scalar(-1), f, o);
    const auto& info = *u.picard;
    CHECK(info.k_bound == Approx(0.2797).epsilon(1e-3));
    CHECK(info.k_estimate <= info.k_bound + 0.05);
    CHECK(info.residuals.back() <= o.res_tol);
    for (std::size_t m = 2; m < info.residuals.size(); ++m)
      CHECK(info.residuals[m] <= (info.k_bound + 0.05) * info.residuals[m - 1]);
  }

  TEST_CASE("picard preconditions") {
    const auto strong = ParametricSignal::separable(Signal::sine(), Signal::constant(1.0), 2.0, Nonlinearity::sine);
    CHECK_THROWS_AS(picard_solve(Semigroup::scalar(-1), strong, {}), NotAContraction);
    const auto varying = ParametricSignal::separable(Signal::zero(), Signal::sine(), 0.1, Nonlinearity::tanh);
    PicardOptions o;
    o.p = 1.5;
    CHECK_THROWS_AS(picard_solve(Semigroup::scalar(-1), varying, o), InvalidExponent);
    o.p = 2.0;
    CHECK_NOTHROW(picard_solve(Semigroup::scalar(-1), varying, o));
    PicardOptions tight;
    tight.max_iter = 2;
    tight.res_tol = 1e-14;
    const auto f = ParametricSignal::separable(Signal::sine(), Signal::constant(1.0), 0.25, Nonlinearity::sine);
    try {
      picard_solve(Semigroup::scalar(-1), f, tight);
      FAIL("expected MaxIterExceeded");
    } catch (const MaxIterExceeded& e) {
      CHECK(e.residuals().size() == 2);
    }
  }

  TEST_CASE("gronwall bound") {
    CHECK(gronwall_bound(1, {0.5}, {1}) == 2.0);
    CHECK(gronwall_bound(3, {}, {}) == 3.0);
    CHECK(gronwall_bound(3, {}, {2.0}) == 3.0);
    CHECK(gronwall_bound(0, {0.2, 0.3}, {1, 2}) == 0.0);
    CHECK(gronwall_bound(1, {0.2, 0.3}, {1, 2}) == Approx(2.0));
    CHECK_THROWS_AS(gronwall_bound(1, {0.5, 0.5}, {1}), HypothesisViolated);
    CHECK_THROWS_AS(gronwall_bound(1, {0.5}, {}), HypothesisViolated);
  }

  TEST_CASE("translation diagnostic") {
    const auto f = ParametricSignal::from_signal(Signal::sine());
    const auto zero = translation_diagnostic(f, nullptr, 0.0, 2, 2 * kPi, 1, 1);
    CHECK(zero.alpha0 == 0.0);
    CHECK(zero.weighted == 0.0);
    const auto period = translation_diagnostic(f, nullptr, 2 * kPi, 2, 2 * kPi, 1, 1);
    CHECK(period.alpha0 == Approx(0.0).scale(1e-6));
    CHECK(period.weighted == Approx(0.0).scale(1e-6));
    const auto half = translation_diagnostic(f, nullptr, kPi, 2, 2 * kPi, 1, 1);
    CHECK(half.alpha0 == Approx(2.0).epsilon(1e-4));
    CHECK(half.weighted == Approx(2.0).epsilon(1e-4));
    CHECK(half.tail_bound <= 1e-6);
    // delta1 = 2, gamma = 1: alpha0 = 2/2, weighted = int e^{r} (2/2) dr = 1.
    const auto other = translation_diagnostic(f, nullptr, kPi, 2, 2 * kPi, 2, 1);
    CHECK(other.alpha0 == Approx(1.0).epsilon(1e-4));
    CHECK(other.weighted == Approx(1.0).epsilon(1e-4));
  }

  TEST_CASE("translation diagnostic along a solution") {
    const auto f = ParametricSignal::separable(Signal::sine(), Signal::constant(1.0), 0.25, Nonlinearity::sine);
    CHECK_THROWS_AS(translation_diagnostic(f, nullptr, 1.0, 2, 1, 1, 1), InvalidArgument);
    PicardOptions o;
    o.t0 = -40;
    o.t1 = 3;
    const auto u = picard_solve(Semigroup::scalar(-1), f, o);
    const auto d = translation_diagnostic(f, &u, 2 * kPi, 2, 1, 1, 1);
    // u is 2 pi periodic up to the solver tolerances, so h is tiny.
    CHECK(d.alpha0 < 1e-6);
    CHECK(d.horizon <= 40.0);
    const auto short_u = picard_solve(Semigroup::scalar(-1), f, PicardOptions{});
    CHECK_THROWS_AS(translation_diagnostic(f, &short_u, 1.0, 2, 1, 1, 1), InvalidArgument);
  }
}
