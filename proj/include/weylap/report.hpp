#pragma once

// JSON and CSV emission for estimator results. Non-finite numbers are
// written as the strings "inf", "-inf" and "nan".

#include "weylap/evolution.hpp"
#include "weylap/semigroup.hpp"
#include "weylap/seminorm.hpp"
#include "weylap/translation.hpp"

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace weylap {

nlohmann::json number(double x);
nlohmann::json to_json(const Vec& v);

nlohmann::json to_json(const SeminormEstimate& e);
nlohmann::json to_json(const DanilovMembership& m);
nlohmann::json to_json(const TranslationSet& s);
nlohmann::json to_json(const Classification& c);
nlohmann::json to_json(const UrsellAgreement& a);
nlohmann::json to_json(const StabilityCheck& s);
nlohmann::json to_json(const LinearValue& v);
nlohmann::json to_json(const PicardInfo& p);
/// Certificate only: grid extent, tail_bound, quad_tol, sup_norm, picard.
nlohmann::json to_json(const MildSolution& u);
nlohmann::json to_json(const ContractionCheck& c);
nlohmann::json to_json(const WeylCondition& w);
nlohmann::json to_json(const TranslationDiagnostic& d);

/// Pretty-printed with a trailing newline; creates parent directories.
void write_json(const std::filesystem::path& file, const nlohmann::json& doc);

/// Writes a header line and rows of numbers with 17 significant digits.
void write_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

void write_history_csv(const std::filesystem::path& file, const History& history);
void write_landscape_csv(const std::filesystem::path& file, const TranslationSet& set);
void write_solution_csv(const std::filesystem::path& file, const MildSolution& u);

}  // namespace weylap
