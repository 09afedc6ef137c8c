#include "doctest.h"
#include "oracles.hpp"

#include "weylap/report.hpp"
#include "weylap/verify.hpp"

#include <algorithm>

using namespace weylap;
using doctest::Approx;

namespace {

const Check& find(const VerificationReport& r, const std::string& prefix) {
  const auto it = std::find_if(r.checks.begin(), r.checks.end(),
                               [&](const Check& c) { return c.description.rfind(prefix, 0) == 0; });
  REQUIRE(it != r.checks.end());
  return *it;
}

}  // namespace

TEST_SUITE("verify") {
  TEST_CASE("report bookkeeping") {
    VerificationReport r;
    r.near("a", 1.0, 1.0 + 1e-10, 1e-9);
    r.at_most("b", 2.0, 2.0);
    r.at_least("c", 2.0, 2.5, 0.5);
    r.flag("d", false, false);
    CHECK(r.passed());
    r.at_most("e", 1.0, 0.5);
    CHECK_FALSE(r.passed());
    CHECK(r.checks.back().relation == "le");
    const auto j = to_json(r);
    CHECK(j["passed"] == false);
    CHECK(j["checks"].size() == 5);
  }

  TEST_CASE("paper signals") {
    CHECK(paper_step().scalar(0.25) == 1.0);
    CHECK(paper_primitive().scalar(10.0) == 0.5);
    for (double t : {-1.0, 0.5, 2.0}) CHECK(paper_solution().scalar(t) == Approx(oracle::relaxed(t)).epsilon(1e-15));
    CHECK(paper_solution().scalar(0.5) == Approx(0.39347).epsilon(1e-5));
    CHECK(paper_solution().scalar(2.0) == Approx(0.08779).epsilon(1e-4));
  }

  TEST_CASE("example 1") {
    const auto r = verify_example1();
    CHECK(r.passed());
    CHECK(find(r, "sup |F|").measured == Approx(0.5).epsilon(1e-12));
    CHECK(find(r, "|F(10) - F(0)|").measured == 0.5);
    CHECK(find(r, "S^1_100 distance").measured == Approx(0.025).epsilon(1e-9));
    CHECK(find(r, "first Weyl window").measured == 128.0);
    CHECK(r.tables.count("example1_weyl_landscape") == 1);
  }

  TEST_CASE("example 2") {
    const auto r = verify_example2();
    CHECK(r.passed());
    CHECK_FALSE(r.notes.empty());
    std::vector<double> errors;
    for (const auto& row : r.tables.at("example2_quadrature").rows) {
      CHECK(std::abs(row[4] - oracle::relaxed(row[0])) == Approx(row[5]).epsilon(1e-12).scale(1e-15));
      CHECK(row[5] <= row[6]);
    }
  }

  TEST_CASE("superposition") {
    const auto sine = Signal::sine();
    ClassifyPolicy policy;
    policy.scan = {-5, 5, 0.1, 128};
    policy.tau = {0, 30, 0.05};
    policy.weyl_windows = {1, 2, 4};
    const auto f = ParametricSignal::separable(Signal::zero(), Signal::constant(1.0), 1.0, Nonlinearity::identity);
    const auto r = verify_superposition("identity", f, Signal::constant(1.0), 2.0, sine, 2.0, 0.2, policy);
    CHECK(r.passed());
    CHECK(r.artifacts["p"] == 1.0);
    CHECK(r.artifacts["classification"]["bohr"] == true);

    // sin(t) sin(cos t) repeats every pi.
    const auto g = ParametricSignal::separable(Signal::zero(), sine, 1.0, Nonlinearity::sine);
    const auto cosine = Signal::trig_sum({{1.0, 1.0, std::numbers::pi / 2}});
    const auto s = verify_superposition("sin_sin", g, Signal::magnitude(sine), 4.0, cosine, 4.0, 0.2, policy);
    CHECK(s.passed());
    CHECK(s.artifacts["max_gap"].get<double>() < std::numbers::pi);
    for (double t : {0.3, 1.7, 4.0}) CHECK(Signal::compose(g, cosine).scalar(t + std::numbers::pi) ==
                                           Approx(Signal::compose(g, cosine).scalar(t)).epsilon(1e-12));
  }

  TEST_CASE("superposition rejects incompatible exponents") {
    const auto f = ParametricSignal::from_signal(Signal::sine());
    CHECK_THROWS_AS(verify_superposition("bad", f, Signal::constant(0.0), 1.5, Signal::sine(), 1.5, 0.1, {}),
                    ExponentMismatch);
    CHECK_THROWS_AS(verify_superposition("bad", f, Signal::constant(0.0), 0.5, Signal::sine(), 4, 0.1, {}),
                    ExponentMismatch);
  }

  TEST_CASE("a false Lipschitz bound fails the spot check") {
    const auto f = ParametricSignal::separable(Signal::zero(), Signal::constant(1.0), 2.0, Nonlinearity::identity);
    ClassifyPolicy policy;
    policy.scan = {-2, 2, 0.25, 64};
    policy.tau = {0, 10, 0.5};
    policy.weyl_windows = {1};
    const auto r = verify_superposition("lying", f, Signal::constant(1.0), 2.0, Signal::sine(), 2.0, 0.2, policy,
                                        {1, 200});
    CHECK_FALSE(r.passed());
    CHECK(r.checks.front().measured == Approx(2.0));
  }

  TEST_CASE("ursell suite") {
    const auto r = verify_ursell_suite();
    CHECK(r.passed());
    CHECK(find(r, "agreement fraction for constant").measured == 1.0);
    CHECK(find(r, "agreement fraction for sin").measured >= 0.99);
    CHECK(find(r, "agreement fraction for F").measured >= 0.95);
  }

  TEST_CASE("reports are reproducible under a fixed seed") {
    const VerifyConfig cfg{77, 2000};
    CHECK(to_json(verify_example1(cfg)).dump() == to_json(verify_example1(cfg)).dump());
  }
}
