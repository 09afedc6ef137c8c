#include "weylap/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace weylap {

using nlohmann::json;

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json to_json(const Vec& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

namespace {

json history_json(const History& h) {
  json out = json::array();
  for (const auto& [l, e] : h) out.push_back({{"l", number(l)}, {"estimate", number(e)}});
  return out;
}

}  // namespace

json to_json(const SeminormEstimate& e) {
  json out{{"value", number(e.value)},
           {"p", number(e.p)},
           {"l", number(e.window_l)},
           {"argmax_xi", number(e.argmax_xi)},
           {"converged", e.converged}};
  if (!e.history.empty()) out["history"] = history_json(e.history);
  return out;
}

json to_json(const DanilovMembership& m) {
  json steps = json::array();
  for (const auto& s : m.history)
    steps.push_back({{"delta", number(s.delta)}, {"l", number(s.l)}, {"value", number(s.value)}});
  return {{"in_mstar", m.in_mstar}, {"history", steps}};
}

json to_json(const TranslationSet& s) {
  json accepted = json::array();
  for (const auto& a : s.accepted) accepted.push_back({{"tau", number(a.tau)}, {"margin", number(a.margin)}});
  return {{"convention", to_string(s.convention)},
          {"eps", number(s.eps)},
          {"p", number(s.p)},
          {"l", number(s.l)},
          {"tau_range", {{"min", number(s.range.min)}, {"max", number(s.range.max)}, {"step", number(s.range.step)}}},
          {"accepted_count", s.accepted.size()},
          {"rejected_count", s.rejected_count},
          {"max_gap", number(s.max_gap)},
          {"density_bound_k", number(s.density_bound_k)},
          {"relatively_dense", s.relatively_dense()},
          {"accepted", accepted}};
}

json to_json(const Classification& c) {
  json weyl = json::array();
  for (const auto& s : c.weyl_sets) weyl.push_back(to_json(s));
  return {{"label", to_string(c.label)},
          {"bohr", c.bohr},
          {"stepanov", c.stepanov},
          {"weyl", c.weyl},
          {"weyl_window", number(c.weyl_window)},
          {"bohr_set", to_json(c.bohr_set)},
          {"stepanov_set", to_json(c.stepanov_set)},
          {"weyl_sets", weyl}};
}

json to_json(const UrsellAgreement& a) {
  json dis = json::array();
  for (double t : a.disagreements) dis.push_back(number(t));
  return {{"agree_fraction", number(a.agree_fraction)},
          {"disagreements", dis},
          {"classical_accepted", a.classical.accepted.size()},
          {"ursell_accepted", a.ursell.accepted.size()}};
}

json to_json(const StabilityCheck& s) {
  return {{"ok", s.ok}, {"worst_ratio", number(s.worst_ratio)}, {"worst_t", number(s.worst_t)}};
}

json to_json(const LinearValue& v) {
  return {{"value", to_json(v.value)},
          {"tail_bound", number(v.tail_bound)},
          {"quad_tol", number(v.quad_tol)},
          {"lower_limit", number(v.lower)},
          {"stepanov_bound", number(v.stepanov_bound)}};
}

json to_json(const PicardInfo& p) {
  json res = json::array();
  for (double r : p.residuals) res.push_back(number(r));
  return {{"iterations", p.iterations},
          {"residuals", res},
          {"k_estimate", number(p.k_estimate)},
          {"k_bound", number(p.k_bound)}};
}

json to_json(const MildSolution& u) {
  json out{{"t_min", u.t.empty() ? json(nullptr) : number(u.t.front())},
           {"t_max", u.t.empty() ? json(nullptr) : number(u.t.back())},
           {"points", u.t.size()},
           {"sup_norm", number(u.sup_norm())},
           {"tail_bound", number(u.tail_bound)},
           {"quad_tol", number(u.quad_tol)}};
  if (u.picard) out["picard"] = to_json(*u.picard);
  return out;
}

json to_json(const ContractionCheck& c) {
  return {{"k", number(c.k)}, {"threshold", number(c.threshold)}, {"satisfied_13", c.satisfied_13}};
}

json to_json(const WeylCondition& w) { return {{"satisfied", w.satisfied}, {"bound", number(w.bound)}}; }

json to_json(const TranslationDiagnostic& d) {
  return {{"alpha0", number(d.alpha0)},
          {"weighted", number(d.weighted)},
          {"tail_bound", number(d.tail_bound)},
          {"horizon", number(d.horizon)}};
}

void write_json(const std::filesystem::path& file, const json& doc) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file);
  if (!out) throw Error("cannot write " + file.string());
  out << doc.dump(2) << '\n';
}

void write_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file);
  if (!out) throw Error("cannot write " + file.string());
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  char buf[32];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out << (i ? "," : "") << buf;
    }
    out << '\n';
  }
}

void write_history_csv(const std::filesystem::path& file, const History& history) {
  std::vector<std::vector<double>> rows;
  for (const auto& [l, e] : history) rows.push_back({l, e});
  write_csv(file, {"l", "estimate"}, rows);
}

void write_landscape_csv(const std::filesystem::path& file, const TranslationSet& set) {
  std::vector<std::vector<double>> rows;
  for (const auto& [tau, d] : set.landscape) rows.push_back({tau, d});
  write_csv(file, {"tau", "distance"}, rows);
}

void write_solution_csv(const std::filesystem::path& file, const MildSolution& u) {
  std::vector<std::string> header{"t"};
  for (int i = 0; i < u.dim(); ++i) header.push_back("u" + std::to_string(i + 1));
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < u.t.size(); ++k) {
    std::vector<double> row{u.t[k]};
    for (int i = 0; i < u.dim(); ++i) row.push_back(u.u[k](i));
    rows.push_back(std::move(row));
  }
  write_csv(file, header, rows);
}

}  // namespace weylap
