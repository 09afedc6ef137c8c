#include "weylap/signal_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace weylap {

using nlohmann::json;

namespace {

const json& params_of(const json& spec) {
  static const json kEmpty = json::object();
  if (!spec.contains("params")) return kEmpty;
  return spec.at("params");
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw SpecError(where, "expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.contains(key)) throw SpecError(where + "." + key, "unknown key");
}

double number(const json& params, const std::string& key, const std::string& where) {
  if (!params.contains(key)) throw SpecError(where + "." + key, "missing required number");
  const auto& v = params.at(key);
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  if (!v.is_number()) throw SpecError(where + "." + key, "expected a number");
  return v.get<double>();
}

double number_or(const json& params, const std::string& key, double fallback,
                 const std::string& where) {
  return params.contains(key) ? number(params, key, where) : fallback;
}

std::vector<Signal> children_of(const json& spec, const std::filesystem::path& base,
                                const std::string& where);

Vec vec_from_json(const json& v, const std::string& where) {
  if (v.is_number()) return scalar_vec(v.get<double>());
  if (!v.is_array() || v.empty() || v.size() > static_cast<std::size_t>(kMaxDim))
    throw SpecError(where, "expected a number or an array of 1.." + std::to_string(kMaxDim) +
                               " numbers");
  Vec out(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw SpecError(where, "expected numeric entries");
    out(static_cast<int>(i)) = v[i].get<double>();
  }
  return out;
}

Signal parse_sampled(const json& params, const std::filesystem::path& base, const std::string& where) {
  std::vector<double> t;
  std::vector<Vec> values;
  if (params.contains("csv")) {
    std::vector<std::string> files;
    const auto& csv = params.at("csv");
    if (csv.is_string()) {
      files.push_back(csv.get<std::string>());
    } else if (csv.is_array()) {
      for (const auto& f : csv) files.push_back(f.get<std::string>());
    } else {
      throw SpecError(where + ".csv", "expected a path or a list of paths");
    }
    if (files.empty() || files.size() > static_cast<std::size_t>(kMaxDim))
      throw SpecError(where + ".csv", "need 1.." + std::to_string(kMaxDim) + " files");
    std::vector<CsvSeries> series;
    for (const auto& f : files) {
      std::filesystem::path p(f);
      if (p.is_relative() && !base.empty()) p = base / p;
      series.push_back(read_two_column_csv(p));
    }
    t = series.front().t;
    for (const auto& s : series)
      if (s.t != t) throw SpecError(where + ".csv", "all dimensions must share the same time column");
    values.resize(t.size(), Vec(static_cast<int>(series.size())));
    for (std::size_t d = 0; d < series.size(); ++d)
      for (std::size_t i = 0; i < t.size(); ++i) values[i](static_cast<int>(d)) = series[d].value[i];
  } else {
    if (!params.contains("t") || !params.contains("values"))
      throw SpecError(where, "sampled needs either csv or t/values");
    t = params.at("t").get<std::vector<double>>();
    for (const auto& v : params.at("values")) values.push_back(vec_from_json(v, where + ".values"));
  }
  try {
    return Signal::sampled(std::move(t), std::move(values));
  } catch (const Error& e) {
    throw SpecError(where, e.what());
  }
}

Signal parse_node(const json& spec, const std::filesystem::path& base, const std::string& where) {
  reject_unknown(spec, {"kind", "params", "children", "label"}, where);
  if (!spec.contains("kind") || !spec.at("kind").is_string())
    throw SpecError(where + ".kind", "missing or not a string");
  const auto kind = spec.at("kind").get<std::string>();
  const json& params = params_of(spec);
  const std::string pw = where + ".params";
  auto children = children_of(spec, base, where);
  auto expect_children = [&](std::size_t lo, std::size_t hi) {
    if (children.size() < lo || children.size() > hi)
      throw SpecError(where + ".children", "kind '" + kind + "' takes " + std::to_string(lo) +
                                               (lo == hi ? "" : "+") + " children");
  };

  Signal out = Signal::zero();
  try {
    if (kind == "constant") {
      reject_unknown(params, {"value"}, pw);
      expect_children(0, 0);
      if (!params.contains("value")) throw SpecError(pw + ".value", "missing");
      out = Signal::constant(vec_from_json(params.at("value"), pw + ".value"));
    } else if (kind == "paper_step") {
      reject_unknown(params, {}, pw);
      expect_children(0, 0);
      out = Signal::unit_pulse();
    } else if (kind == "pulse_train") {
      reject_unknown(params, {"period", "width", "height", "phase"}, pw);
      expect_children(0, 0);
      out = Signal::pulse_train(number(params, "period", pw), number(params, "width", pw),
                                number_or(params, "height", 1.0, pw), number_or(params, "phase", 0.0, pw));
    } else if (kind == "trig_sum") {
      reject_unknown(params, {"terms"}, pw);
      expect_children(0, 0);
      if (!params.contains("terms") || !params.at("terms").is_array())
        throw SpecError(pw + ".terms", "expected an array");
      std::vector<TrigTerm> terms;
      int i = 0;
      for (const auto& term : params.at("terms")) {
        const std::string tw = pw + ".terms[" + std::to_string(i++) + "]";
        reject_unknown(term, {"a", "omega", "phi"}, tw);
        terms.push_back({number_or(term, "a", 1.0, tw), number_or(term, "omega", 1.0, tw),
                         number_or(term, "phi", 0.0, tw)});
      }
      out = Signal::trig_sum(std::move(terms));
    } else if (kind == "exp_decay") {
      reject_unknown(params, {"amplitude", "rate", "start", "end"}, pw);
      expect_children(0, 0);
      out = Signal::exp_decay(number_or(params, "amplitude", 1.0, pw), number(params, "rate", pw),
                              number_or(params, "start", 0.0, pw), number_or(params, "end", kInf, pw));
    } else if (kind == "primitive") {
      reject_unknown(params, {"anchor"}, pw);
      expect_children(1, 1);
      const double anchor = number_or(params, "anchor", -kInf, pw);
      if (anchor == kInf) throw SpecError(pw + ".anchor", "anchor cannot be +inf");
      out = Signal::primitive(children.front(),
                              std::isinf(anchor) ? std::nullopt : std::optional<double>(anchor));
    } else if (kind == "sum") {
      reject_unknown(params, {}, pw);
      expect_children(1, 64);
      out = Signal::sum(children);
    } else if (kind == "scale") {
      reject_unknown(params, {"factor"}, pw);
      expect_children(1, 1);
      out = children.front().scaled(number(params, "factor", pw));
    } else if (kind == "shift") {
      reject_unknown(params, {"tau"}, pw);
      expect_children(1, 1);
      out = children.front().shifted(number(params, "tau", pw));
    } else if (kind == "sampled") {
      reject_unknown(params, {"t", "values", "csv"}, pw);
      expect_children(0, 0);
      out = parse_sampled(params, base, pw);
    } else {
      throw SpecError(where + ".kind", "unknown kind '" + kind + "'");
    }
  } catch (const SpecError&) {
    throw;
  } catch (const Error& e) {
    throw SpecError(where, e.what());
  }
  if (spec.contains("label")) out = out.with_label(spec.at("label").get<std::string>());
  return out;
}

std::vector<Signal> children_of(const json& spec, const std::filesystem::path& base,
                                const std::string& where) {
  std::vector<Signal> out;
  if (!spec.contains("children")) return out;
  const auto& c = spec.at("children");
  if (!c.is_array()) throw SpecError(where + ".children", "expected an array");
  for (std::size_t i = 0; i < c.size(); ++i)
    out.push_back(parse_node(c[i], base, where + ".children[" + std::to_string(i) + "]"));
  return out;
}

json read_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw SpecError(file.string(), "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecError(file.string(), std::string("invalid JSON: ") + e.what());
  }
}

bool parse_row(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
      if (used != cell.size()) return false;
    } catch (const std::exception&) {
      return false;
    }
  }
  return !out.empty();
}

}  // namespace

Signal parse_signal(const json& spec, const std::filesystem::path& base_dir) {
  return parse_node(spec, base_dir, "signal");
}

Signal load_signal(const std::filesystem::path& file) {
  return parse_signal(read_json_file(file), file.parent_path());
}

ParametricSignal parse_parametric(const json& spec, const std::filesystem::path& base_dir) {
  reject_unknown(spec, {"kind", "params", "forcing", "modulation", "label"}, "parametric");
  if (!spec.contains("kind") || spec.at("kind") != "separable")
    throw SpecError("parametric.kind", "only kind 'separable' is supported");
  const json& params = params_of(spec);
  reject_unknown(params, {"coupling", "nonlinearity"}, "parametric.params");
  if (!spec.contains("forcing")) throw SpecError("parametric.forcing", "missing");
  const Signal forcing = parse_node(spec.at("forcing"), base_dir, "parametric.forcing");
  const Signal modulation = spec.contains("modulation")
                                ? parse_node(spec.at("modulation"), base_dir, "parametric.modulation")
                                : Signal::constant(1.0);
  const double coupling = number_or(params, "coupling", 0.0, "parametric.params");
  const std::string name = params.value("nonlinearity", std::string("zero"));
  const auto phi = parse_nonlinearity(name);
  if (!phi) throw SpecError("parametric.params.nonlinearity", "unknown nonlinearity '" + name + "'");
  try {
    return ParametricSignal::separable(forcing, modulation, coupling, *phi);
  } catch (const Error& e) {
    throw SpecError("parametric", e.what());
  }
}

ParametricSignal load_parametric(const std::filesystem::path& file) {
  return parse_parametric(read_json_file(file), file.parent_path());
}

CsvSeries read_two_column_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw SpecError(file.string(), "cannot open CSV file");
  CsvSeries out;
  std::string line;
  std::vector<double> row;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!parse_row(line, row)) {
      if (lineno == 1) continue;
      throw SpecError(file.string() + ":" + std::to_string(lineno), "non-numeric row");
    }
    if (row.size() != 2)
      throw SpecError(file.string() + ":" + std::to_string(lineno), "expected two columns (t, value)");
    out.t.push_back(row[0]);
    out.value.push_back(row[1]);
  }
  if (out.t.size() < 2) throw SpecError(file.string(), "need at least two samples");
  return out;
}

std::vector<std::vector<double>> read_matrix_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw SpecError(file.string(), "cannot open CSV file");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::vector<double> row;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!parse_row(line, row))
      throw SpecError(file.string() + ":" + std::to_string(lineno), "non-numeric row");
    if (!rows.empty() && row.size() != rows.front().size())
      throw SpecError(file.string() + ":" + std::to_string(lineno), "ragged matrix row");
    rows.push_back(row);
  }
  if (rows.empty()) throw SpecError(file.string(), "empty matrix");
  return rows;
}

}  // namespace weylap
