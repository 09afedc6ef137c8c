#pragma once

// Reproduction harness for the worked examples: the primitive F of the unit
// pulse, the bounded solution x of x' = -x + pulse, superposition of Weyl
// almost periodic inputs, and classical/Ursell agreement.

#include "weylap/translation.hpp"

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace weylap {

struct VerifyConfig {
  unsigned long long seed = 20240917;
  int probes = 10000;
};

struct Check {
  std::string description;
  std::string relation;  ///< "near", "le", "ge" or "flag"
  double measured = 0.0;
  double target = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct VerificationReport {
  std::string case_id;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  nlohmann::json artifacts = nlohmann::json::object();
  std::map<std::string, Table> tables;  ///< per-case CSV data, keyed by file stem

  bool passed() const;
  void near(std::string description, double measured, double target, double tol);
  void at_most(std::string description, double measured, double bound, double tol = 0.0);
  void at_least(std::string description, double measured, double bound, double tol = 0.0);
  void flag(std::string description, bool value, bool expected = true);
};

nlohmann::json to_json(const VerificationReport& r);

/// The unit pulse f and its primitive F from -infinity.
Signal paper_step();
Signal paper_primitive();
/// Bounded solution of x' = -x + f.
Signal paper_solution();

VerificationReport verify_example1(const VerifyConfig& config = {});
VerificationReport verify_example2(const VerifyConfig& config = {});

/// Composition t -> f(t, x(t)) at the exponent p with 1/p = 1/q + 1/r.
/// Throws ExponentMismatch when p < 1 or p is infinite.
VerificationReport verify_superposition(const std::string& case_id, const ParametricSignal& f, const Signal& L,
                                        double r, const Signal& x, double q, double eps,
                                        const ClassifyPolicy& policy, const VerifyConfig& config = {});

VerificationReport verify_ursell_suite(const VerifyConfig& config = {});

/// Every case above, superposition on its three reference inputs.
std::vector<VerificationReport> verify_all(const VerifyConfig& config = {});

}  // namespace weylap
