#include "doctest.h"
#include "oracles.hpp"

#include "weylap/translation.hpp"

#include <numbers>

using namespace weylap;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

TranslationQuery query(double eps, double p, double l, TauGrid tau, ScanSpec scan) {
  TranslationQuery q;
  q.eps = eps;
  q.p = p;
  q.l = l;
  q.tau = tau;
  q.scan = scan;
  return q;
}

}  // namespace

TEST_SUITE("aptest") {
  TEST_CASE("a full period is an exact translation number") {
    const ScanSpec scan{-5, 5, 0.05, 256};
    for (auto c : {Convention::classical, Convention::ursell, Convention::bohr})
      CHECK(translation_distance(Signal::sine(), 2 * kPi, 2.0, 2 * kPi, c, scan) == Approx(0.0).scale(1e-10));
  }

  TEST_CASE("half a period of sine") {
    const double d = translation_distance(Signal::sine(), kPi, 2.0, 2 * kPi, Convention::classical, {-5, 5, 0.05, 256});
    CHECK(d == Approx(std::sqrt(2.0)).epsilon(1e-6));
  }

  TEST_CASE("shifted pulse with a long window") {
    const double d = translation_distance(Signal::unit_pulse(), 1.0, 1.0, 100.0, Convention::classical,
                                          {-200, 200, 0.01, 256});
    const double ref = oracle::simpson([](double t) { return std::abs(oracle::step(t + 1) - oracle::step(t)); }, -100,
                                       0.5, {-1, -0.5, 0, 0.5}) /
                       100.0;
    CHECK(ref == Approx(0.01).epsilon(1e-9));
    CHECK(d <= 0.01 + 1e-12);
    CHECK(d == Approx(ref).epsilon(1e-9));
  }

  TEST_CASE("bohr distance is a sup over the probe grid") {
    const double d = translation_distance(Signal::unit_pulse(), 0.25, 1.0, 1.0, Convention::bohr, {-2, 2, 0.1, 64});
    CHECK(d == 1.0);
    const double s = translation_distance(Signal::sine(), 0.5, 1.0, 1.0, Convention::bohr, {0, 2 * kPi, 0.1, 256});
    CHECK(s == Approx(2 * std::sin(0.25)).epsilon(1e-4));
  }

  TEST_CASE("sine translation set clusters around multiples of 2 pi") {
    const auto set = scan_translations(Signal::sine(), query(0.1, 2.0, 2 * kPi, {0, 50, 0.01}, {0, 2 * kPi, 0.05, 256}));
    REQUIRE_FALSE(set.accepted.empty());
    CHECK(set.accepts(0.0));
    // Each cluster is |tau - 2 pi k| < 0.1 sqrt 2; gaps run between cluster edges.
    CHECK(set.max_gap == Approx(2 * kPi - 0.2828).epsilon(0.01));
    CHECK(std::abs(set.max_gap - 2 * kPi) < 0.3);
    for (const auto& a : set.accepted) {
      const double k = std::round(a.tau / (2 * kPi));
      CHECK(std::abs(a.tau - 2 * kPi * k) < 0.1 * std::sqrt(2.0) + 0.01);
      CHECK(a.margin > 0.0);
    }
    CHECK(set.relatively_dense());
    CHECK(set.density_bound_k == set.max_gap);
    CHECK(set.rejected_count + static_cast<long long>(set.accepted.size()) == 5001);
  }

  TEST_CASE("constants accept everything") {
    const auto set = scan_translations(Signal::constant(4.0), query(1e-3, 1.0, 1.0, {0, 5, 0.25}, {-1, 1, 0.1, 64}));
    CHECK(set.accepted.size() == 21);
    CHECK(set.max_gap == Approx(0.25));
    CHECK(set.rejected_count == 0);
  }

  TEST_CASE("pulse translations at window ten") {
    const double step = 1.0 / 64;
    const auto set = scan_translations(Signal::unit_pulse(), query(0.1, 1.0, 10.0, {0, 20, step}, {-25, 5, step, 256}));
    for (const auto& [tau, d] : set.landscape) {
      // Oracle: shared window mass is 2 min(tau, 1/2) while both bumps fit in the window.
      const double mass = tau <= 9.5 ? 2 * std::min(tau, 0.5) : 0.5 + std::max(0.0, 10.0 - tau);
      CHECK(d == Approx(std::min(mass, 1.0) / 10.0).epsilon(1e-9).scale(1.0));
      if (tau < 0.5 - 1e-9 || tau > 9.5 + 1e-9)
        CHECK(set.accepts(tau));
      else if (tau > 0.5 + 1e-9 && tau < 9.5 - 1e-9)
        CHECK_FALSE(set.accepts(tau));
    }
  }

  TEST_CASE("a zero margin is a rejection") {
    // Unit windows see one bump of mass 1/2 once the shift separates them.
    const auto set = scan_translations(Signal::unit_pulse(), query(0.5, 1.0, 1.0, {1, 3, 1}, {-5, 5, 0.25, 256}));
    for (const auto& [tau, d] : set.landscape) CHECK(d == 0.5);
    CHECK(set.accepted.empty());
    CHECK_FALSE(set.relatively_dense());
    CHECK(set.max_gap == 2.0);
  }

  TEST_CASE("empty tau ranges") {
    CHECK_THROWS_AS(scan_translations(Signal::sine(), query(0.1, 1.0, 1.0, {1, 1, 0.1}, {-1, 1, 0.1, 64})), EmptyRange);
    CHECK_THROWS_AS(scan_translations(Signal::sine(), query(0.1, 1.0, 1.0, {0, 1, 0.0}, {-1, 1, 0.1, 64})), EmptyRange);
    CHECK(TauGrid{-0.3, 0.3, 0.1}.points()[3] == 0.0);
  }

  TEST_CASE("classification of periodic and constant signals") {
    ClassifyPolicy policy;
    policy.scan = {-5, 5, 0.05, 128};
    policy.tau = {0, 40, 0.05};
    policy.weyl_windows = {1, 2, 4};
    const auto s = classify(Signal::sine(), 0.1, 1.0, policy);
    CHECK(s.label == ApClass::bohr);
    CHECK(s.bohr);
    CHECK(s.stepanov);
    CHECK(s.weyl);
    CHECK(s.weyl_window == 1.0);
    CHECK(s.weyl_sets.size() == 1);
    const auto c = classify(Signal::constant(1.0), 0.1, 2.0, policy);
    CHECK(c.label == ApClass::bohr);
  }

  TEST_CASE("a lone pulse is only Weyl") {
    ClassifyPolicy policy;
    policy.scan = {-25, 5, 0.25, 64};
    policy.tau = {0, 20, 0.25};
    policy.weyl_windows = {1, 2, 4, 8, 16, 32};
    const auto c = classify(Signal::unit_pulse(), 0.1, 1.0, policy);
    CHECK(c.label == ApClass::weyl);
    CHECK_FALSE(c.bohr);
    CHECK_FALSE(c.stepanov);
    CHECK(c.weyl_window == 16.0);
    CHECK(c.weyl_sets.size() == 5);
  }

  TEST_CASE("nothing dense means unresolved") {
    ClassifyPolicy policy;
    policy.scan = {-5, 5, 0.25, 64};
    policy.tau = {0, 20, 0.5};
    policy.weyl_windows = {1, 2};
    // A ramp never returns near itself.
    const auto ramp = Signal::from_function(1, [](double t, Vec& out) { out(0) = t; }, "ramp");
    const auto c = classify(ramp, 0.1, 1.0, policy);
    CHECK(c.label == ApClass::unresolved);
    CHECK(c.weyl_window == 0.0);
    CHECK(c.weyl_sets.size() == 2);
  }

  TEST_CASE("ursell agreement examples") {
    const auto s = ursell_agreement(Signal::sine(), 0.1, 2.0, 2 * kPi, {0, 50, 0.05}, {-5, 5, 0.05, 128});
    CHECK(s.agree_fraction >= 0.99);
    const auto c = ursell_agreement(Signal::constant(2.0), 0.1, 1.0, 3.0, {0, 10, 0.1}, {-5, 5, 0.1, 64});
    CHECK(c.agree_fraction == 1.0);
    CHECK(c.disagreements.empty());
    const auto f = ursell_agreement(Signal::unit_pulse(), 0.2, 1.0, 50.0, {-20, 20, 0.25}, {-60, 10, 0.25, 64});
    CHECK(f.agree_fraction >= 0.95);
    for (std::size_t i = 0; i < f.classical.landscape.size(); ++i)
      CHECK(f.ursell.landscape[i].second <= f.classical.landscape[i].second + 1e-12);
  }
}
