#pragma once

// Structured-text signal specifications.
//
//   {"kind": "...", "params": {...}, "children": [...], "label": "..."}
//
// kinds: constant {value: number | [numbers]}, paper_step {},
// pulse_train {period, width, height = 1, phase = 0},
// trig_sum {terms: [{a, omega, phi}]}, exp_decay {amplitude, rate, start, end = inf},
// primitive {anchor: number | "-inf"} [1 child], sum [>= 1 children],
// scale {factor} [1 child], shift {tau} [1 child],
// sampled {t: [...], values: [...] | [[...]]} or {csv: path | [paths]}
// where each CSV holds two columns (t, value) for one output dimension.
//
// Parametric forcing files use kind "separable":
//   {"kind": "separable", "params": {"coupling": c, "nonlinearity": "sin"},
//    "forcing": <signal spec>, "modulation": <signal spec, optional>}

#include "weylap/signal.hpp"

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace weylap {

/// Malformed specification. `field` names the offending JSON path.
class SpecError : public Error {
 public:
  SpecError(const std::string& field, const std::string& message)
      : Error(field + ": " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Relative CSV paths resolve against base_dir.
Signal parse_signal(const nlohmann::json& spec, const std::filesystem::path& base_dir = {});
Signal load_signal(const std::filesystem::path& file);

ParametricSignal parse_parametric(const nlohmann::json& spec,
                                  const std::filesystem::path& base_dir = {});
ParametricSignal load_parametric(const std::filesystem::path& file);

struct CsvSeries {
  std::vector<double> t;
  std::vector<double> value;
};

/// Two-column numeric CSV; a non-numeric first line is treated as a header.
CsvSeries read_two_column_csv(const std::filesystem::path& file);

/// Row-major numeric matrix; all rows must have the same length.
std::vector<std::vector<double>> read_matrix_csv(const std::filesystem::path& file);

}  // namespace weylap
