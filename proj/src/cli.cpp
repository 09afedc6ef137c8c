#include "weylap/cli.hpp"

#include "weylap/evolution.hpp"
#include "weylap/parallel.hpp"
#include "weylap/report.hpp"
#include "weylap/signal_io.hpp"
#include "weylap/translation.hpp"
#include "weylap/verify.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

namespace weylap::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& message) : Error(field + ": " + message) {}
};

struct Range3 {
  double min = 0.0;
  double max = 0.0;
  double step = 0.0;
};

double parse_number(const std::string& text, const std::string& field) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(field, "'" + text + "' is not a number");
  }
  if (used != text.size()) throw ConfigError(field, "'" + text + "' is not a number");
  return v;
}

Range3 parse_range(const std::string& text, const std::string& field) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ':');) parts.push_back(part);
  if (parts.size() != 3) throw ConfigError(field, "expected min:max:step, got '" + text + "'");
  return {parse_number(parts[0], field), parse_number(parts[1], field), parse_number(parts[2], field)};
}

std::vector<double> parse_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ',');) out.push_back(parse_number(part, field));
  if (out.empty()) throw ConfigError(field, "expected a comma-separated list");
  return out;
}

ScanSpec make_scan(const std::string& text, int density) {
  const auto r = parse_range(text, "--scan");
  ScanSpec scan{r.min, r.max, r.step, density};
  try {
    scan.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError("--scan", e.what());
  }
  return scan;
}

TauGrid make_tau(const std::string& text) {
  const auto r = parse_range(text, "--tau");
  if (!(r.min < r.max) || !(r.step > 0.0)) throw ConfigError("--tau", "need min < max and step > 0");
  return {r.min, r.max, r.step};
}

struct GeneratorArgs {
  std::optional<double> a;
  std::string diag;
  std::string matrix;
  std::optional<double> M;
  std::optional<double> delta;
};

void add_generator(CLI::App* sub, GeneratorArgs& g) {
  auto* a = sub->add_option("--a", g.a, "scalar generator a < 0");
  auto* d = sub->add_option("--diag", g.diag, "diagonal generator, comma-separated negative entries");
  auto* m = sub->add_option("--matrix", g.matrix, "dense generator, row-major CSV file");
  a->excludes(d)->excludes(m);
  d->excludes(m);
  sub->add_option("--M", g.M, "envelope constant for --matrix");
  sub->add_option("--delta", g.delta, "decay rate for --matrix");
}

Semigroup make_generator(const GeneratorArgs& g) {
  if (g.a) return Semigroup::scalar(*g.a);
  if (!g.diag.empty()) return Semigroup::diagonal(parse_list(g.diag, "--diag"));
  if (!g.matrix.empty()) {
    if (!g.M || !g.delta) throw ConfigError("--matrix", "a dense generator needs --M and --delta");
    const auto rows = read_matrix_csv(g.matrix);
    const auto n = static_cast<int>(rows.size());
    if (n < 1 || n > kMaxDim) throw ConfigError("--matrix", "matrix must be n x n with 1 <= n <= 8");
    Mat A(n, n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n)
        throw ConfigError("--matrix", "matrix must be square");
      for (int j = 0; j < n; ++j) A(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return Semigroup::dense(A, *g.M, *g.delta);
  }
  throw ConfigError("generator", "one of --a, --diag or --matrix is required");
}

json generator_json(const Semigroup& S) {
  return {{"kind", to_string(S.kind())}, {"n", S.dim()}, {"M", number(S.M())}, {"delta", number(S.delta())}};
}

std::string config_scalar(const json& v, const std::string& field) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  if (v.is_array()) {
    std::string out;
    for (const auto& x : v) {
      if (!x.is_number()) throw ConfigError(field, "list entries must be numbers");
      out += (out.empty() ? "" : ",") + x.dump();
    }
    return out;
  }
  throw ConfigError(field, "unsupported value type");
}

bool mentions(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args)
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  return false;
}

// Appends "--key value" for every key of the --config JSON object that is not
// already given on the command line. Unknown keys are errors.
std::vector<std::string> expand_config(const std::vector<std::string>& args, CLI::App& app) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  CLI::App* sub = nullptr;
  for (std::size_t i = 1; i < args.size() && sub == nullptr; ++i)
    for (auto* s : app.get_subcommands({})) {
      if (s->get_name() == args[i]) {
        sub = s;
        break;
      }
    }
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", e.what());
  }
  if (!doc.is_object()) throw ConfigError("--config", "top level must be an object");
  std::vector<std::string> out = args;
  for (const auto& [key, value] : doc.items()) {
    const std::string flag = "--" + key;
    const bool known = app.get_option_no_throw(flag) != nullptr ||
                       (sub != nullptr && sub->get_option_no_throw(flag) != nullptr);
    if (!known || key == "config") throw ConfigError("config." + key, "unknown key");
    if (mentions(args, flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(flag);
      continue;
    }
    out.push_back(flag + "=" + config_scalar(value, "config." + key));
  }
  return out;
}

std::string file_stem(const std::string& subcommand) {
  std::string s = subcommand;
  for (auto& c : s)
    if (c == '-') c = '_';
  return s;
}

struct Outcome {
  json report;
  int code = ok;
};

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stepanov/Weyl seminorms, translation numbers and mild solutions"};
  app.require_subcommand(1);
  app.fallthrough();

  unsigned jobs = 1;
  unsigned long long seed = Defaults::seed;
  std::string out_dir = ".";
  if (const char* env = std::getenv(Defaults::output_env)) out_dir = env;
  std::string config_path;
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--seed", seed, "seed for random probes");
  app.add_option("--out-dir", out_dir, "report directory (default $WEYLAP_OUTPUT_DIR or .)");
  app.add_option("--config", config_path, "JSON object of option values for the subcommand");

  // Options shared by the signal subcommands.
  std::string signal_path;
  double p = 1.0;
  double l = 1.0;
  double eps = 0.1;
  std::string scan_text = Defaults::scan;
  std::string tau_text = Defaults::tau;
  int density = Defaults::density;
  double tol = Defaults::tol;
  double l0 = Defaults::l0;
  double factor = Defaults::factor;
  int max_windows = Defaults::max_windows;
  double dense_fraction = Defaults::dense_fraction;
  std::string convention = "classical";

  auto add_signal = [&](CLI::App* sub) {
    sub->add_option("--signal", signal_path, "signal spec (JSON)")->required()->check(CLI::ExistingFile);
  };
  auto add_scan = [&](CLI::App* sub) {
    sub->add_option("--scan", scan_text, "xi scan range min:max:step")->capture_default_str();
    sub->add_option("--density", density, "quadrature points per unit time")->capture_default_str();
  };
  auto add_schedule = [&](CLI::App* sub) {
    sub->add_option("--l0", l0)->capture_default_str();
    sub->add_option("--factor", factor)->capture_default_str();
    sub->add_option("--max-windows", max_windows)->capture_default_str();
  };

  auto* norm = app.add_subcommand("norm", "Stepanov norm S^p_l");
  add_signal(norm);
  norm->add_option("--p", p)->capture_default_str();
  norm->add_option("--l", l)->capture_default_str();
  add_scan(norm);

  auto* weyl = app.add_subcommand("weyl", "Weyl norm along a window schedule");
  add_signal(weyl);
  weyl->add_option("--p", p)->capture_default_str();
  weyl->add_option("--tol", tol)->capture_default_str();
  add_schedule(weyl);
  add_scan(weyl);

  auto* translations = app.add_subcommand("translations", "eps-translation numbers on a tau grid");
  add_signal(translations);
  translations->add_option("--eps", eps)->capture_default_str();
  translations->add_option("--p", p)->capture_default_str();
  translations->add_option("--l", l)->capture_default_str();
  translations->add_option("--convention", convention)
      ->check(CLI::IsMember({"classical", "ursell", "bohr"}))
      ->capture_default_str();
  translations->add_option("--tau", tau_text, "tau grid min:max:step")->capture_default_str();
  translations->add_option("--dense-fraction", dense_fraction)->capture_default_str();
  add_scan(translations);

  auto* classify_cmd = app.add_subcommand("classify", "Bohr / Stepanov / Weyl ladder");
  add_signal(classify_cmd);
  classify_cmd->add_option("--eps", eps)->capture_default_str();
  classify_cmd->add_option("--p", p)->capture_default_str();
  classify_cmd->add_option("--tau", tau_text)->capture_default_str();
  classify_cmd->add_option("--dense-fraction", dense_fraction)->capture_default_str();
  add_schedule(classify_cmd);
  add_scan(classify_cmd);

  std::string windows_text = "10,20,40,80,160";
  std::string deltas_text = "0.1,0.05,0.025,0.0125,0.00625";
  double danilov_tol = 1e-2;
  auto* danilov = app.add_subcommand("danilov", "M*_p tail functional along (delta, l) schedules");
  add_signal(danilov);
  danilov->add_option("--p", p)->capture_default_str();
  danilov->add_option("--windows", windows_text)->capture_default_str();
  danilov->add_option("--deltas", deltas_text)->capture_default_str();
  danilov->add_option("--tol", danilov_tol)->capture_default_str();
  add_scan(danilov);

  GeneratorArgs gen;
  std::string forcing_path;
  std::optional<double> t_point;
  std::string grid_text;
  double tail_tol = Defaults::tail_tol;
  auto* solve_linear = app.add_subcommand("solve-linear", "bounded mild solution of u' = Au + f(t)");
  add_generator(solve_linear, gen);
  solve_linear->add_option("--forcing", forcing_path, "signal spec (JSON)")->required()->check(CLI::ExistingFile);
  auto* t_opt = solve_linear->add_option("--t", t_point, "single evaluation time");
  auto* grid_opt = solve_linear->add_option("--grid", grid_text, "evaluation grid min:max:step");
  t_opt->excludes(grid_opt);
  solve_linear->add_option("--tail-tol", tail_tol)->capture_default_str();
  solve_linear->add_option("--density", density)->capture_default_str();
  solve_linear->add_option("--p", p, "exponent of the Stepanov bound for the tail")->capture_default_str();

  PicardOptions picard;
  auto* solve_semi = app.add_subcommand("solve-semilinear", "Picard iteration for u' = Au + f(t, u)");
  add_generator(solve_semi, gen);
  solve_semi->add_option("--forcing", forcing_path, "parametric forcing spec (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  solve_semi->add_option("--t0", picard.t0)->capture_default_str();
  solve_semi->add_option("--t1", picard.t1)->capture_default_str();
  solve_semi->add_option("--step", picard.step)->capture_default_str();
  solve_semi->add_option("--p", picard.p)->capture_default_str();
  solve_semi->add_option("--tail-tol", picard.tail_tol)->capture_default_str();
  solve_semi->add_option("--max-iter", picard.max_iter)->capture_default_str();
  solve_semi->add_option("--res-tol", picard.res_tol)->capture_default_str();
  add_scan(solve_semi);

  double tau = 0.0;
  double delta1 = 1.0;
  double gamma = 1.0;
  double history = 80.0;
  auto* diagnostic = app.add_subcommand("diagnostic", "translation diagnostics alpha0 and weighted");
  add_generator(diagnostic, gen);
  diagnostic->add_option("--forcing", forcing_path, "parametric forcing spec (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  diagnostic->add_option("--tau", tau)->required();
  diagnostic->add_option("--p", p)->capture_default_str();
  diagnostic->add_option("--l", l)->capture_default_str();
  diagnostic->add_option("--delta1", delta1)->capture_default_str();
  diagnostic->add_option("--gamma", gamma)->capture_default_str();
  diagnostic->add_option("--tail-tol", tail_tol)->capture_default_str();
  diagnostic->add_option("--density", density)->capture_default_str();
  diagnostic->add_option("--history", history, "solve u on [-history, l + 1]")->capture_default_str();
  diagnostic->add_option("--step", picard.step)->capture_default_str();

  int probes = Defaults::probes;
  auto* verify_paper = app.add_subcommand("verify-paper", "reproduce the worked examples");
  verify_paper->add_option("--probes", probes, "random probe pairs per check")->capture_default_str();

  std::vector<std::string> args;
  try {
    args = expand_config(raw_args, app);
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return config_error;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  }

  set_worker_count(jobs);
  const fs::path dir = out_dir;
  std::string name;
  Outcome outcome;
  try {
    if (norm->parsed()) {
      name = "norm";
      const auto f = load_signal(signal_path);
      const auto est = stepanov_norm(f, p, l, make_scan(scan_text, density));
      outcome.report = {{"subcommand", name}, {"signal", f.label()}, {"estimate", to_json(est)}};
    } else if (weyl->parsed()) {
      name = "weyl";
      const auto f = load_signal(signal_path);
      const WindowSchedule schedule{l0, factor, max_windows};
      outcome.report = {{"subcommand", name}, {"signal", f.label()}, {"tol", number(tol)},
                        {"schedule", {{"l0", number(l0)}, {"factor", number(factor)}, {"max_windows", max_windows}}}};
      History hist;
      try {
        const auto est = weyl_norm(f, p, schedule, tol, make_scan(scan_text, density));
        outcome.report["estimate"] = to_json(est);
        hist = est.history;
      } catch (const NotConverged& e) {
        SeminormEstimate est;
        est.p = p;
        est.converged = false;
        est.history = e.history();
        if (!est.history.empty()) {
          est.window_l = est.history.back().first;
          est.value = est.history.back().second;
        }
        outcome.report["estimate"] = to_json(est);
        outcome.report["error"] = e.what();
        outcome.code = check_failed;
        hist = e.history();
      }
      write_history_csv(dir / "weyl_history.csv", hist);
    } else if (translations->parsed()) {
      name = "translations";
      const auto f = load_signal(signal_path);
      TranslationQuery q;
      q.eps = eps;
      q.p = p;
      q.l = l;
      q.convention = convention == "ursell" ? Convention::ursell
                     : convention == "bohr" ? Convention::bohr
                                            : Convention::classical;
      q.tau = make_tau(tau_text);
      q.scan = make_scan(scan_text, density);
      q.dense_fraction = dense_fraction;
      const auto set = scan_translations(f, q);
      outcome.report = {{"subcommand", name}, {"signal", f.label()}, {"translations", to_json(set)}};
      write_landscape_csv(dir / "translations_landscape.csv", set);
    } else if (classify_cmd->parsed()) {
      name = "classify";
      const auto f = load_signal(signal_path);
      ClassifyPolicy policy;
      policy.weyl_windows = WindowSchedule{l0, factor, max_windows}.windows();
      policy.scan = make_scan(scan_text, density);
      policy.tau = make_tau(tau_text);
      policy.dense_fraction = dense_fraction;
      const auto c = classify(f, eps, p, policy);
      outcome.report = {{"subcommand", name}, {"signal", f.label()}, {"classification", to_json(c)}};
      write_landscape_csv(dir / "classify_bohr.csv", c.bohr_set);
      write_landscape_csv(dir / "classify_stepanov.csv", c.stepanov_set);
      if (!c.weyl_sets.empty()) write_landscape_csv(dir / "classify_weyl.csv", c.weyl_sets.back());
    } else if (danilov->parsed()) {
      name = "danilov";
      const auto f = load_signal(signal_path);
      const auto windows = parse_list(windows_text, "--windows");
      const auto deltas = parse_list(deltas_text, "--deltas");
      outcome.report = {{"subcommand", name}, {"signal", f.label()}, {"tol", number(danilov_tol)}};
      try {
        outcome.report["membership"] =
            to_json(danilov_membership(f, p, windows, deltas, danilov_tol, make_scan(scan_text, density)));
      } catch (const NotConverged& e) {
        json h = json::array();
        for (const auto& [lw, v] : e.history()) h.push_back({{"l", number(lw)}, {"value", number(v)}});
        outcome.report["membership"] = {{"in_mstar", false}, {"history", h}};
        outcome.report["error"] = e.what();
        outcome.code = check_failed;
      }
    } else if (solve_linear->parsed()) {
      name = "solve-linear";
      const auto S = make_generator(gen);
      const auto f = load_signal(forcing_path);
      LinearOptions o;
      o.tail_tol = tail_tol;
      o.density = density;
      o.p = p;
      outcome.report = {{"subcommand", name}, {"forcing", f.label()}, {"generator", generator_json(S)}};
      if (t_point) {
        const auto v = linear_mild_solution(S, f, *t_point, o);
        outcome.report["t"] = number(*t_point);
        outcome.report["solution"] = to_json(v);
      } else {
        if (grid_text.empty()) throw ConfigError("--t", "one of --t or --grid is required");
        const auto r = parse_range(grid_text, "--grid");
        if (!(r.min <= r.max) || !(r.step > 0.0)) throw ConfigError("--grid", "need min <= max and step > 0");
        std::vector<double> grid;
        const auto count = static_cast<long long>(std::floor((r.max - r.min) / r.step + 1e-9));
        for (long long i = 0; i <= count; ++i) grid.push_back(r.min + static_cast<double>(i) * r.step);
        const auto u = linear_mild_solution(S, f, grid, o);
        outcome.report["solution"] = to_json(u);
        outcome.report["bound"] = number(linear_solution_bound(S, f, 1.0, ScanSpec{r.min - 20.0, r.max, 0.05, density}));
        write_solution_csv(dir / "solve_linear.csv", u);
      }
    } else if (solve_semi->parsed()) {
      name = "solve-semilinear";
      const auto S = make_generator(gen);
      const auto f = load_parametric(forcing_path);
      picard.scan = make_scan(scan_text, density);
      outcome.report = {{"subcommand", name}, {"forcing", f.label()}, {"generator", generator_json(S)}};
      try {
        const auto u = picard_solve(S, f, picard);
        outcome.report["solution"] = to_json(u);
        write_solution_csv(dir / "solve_semilinear.csv", u);
      } catch (const MaxIterExceeded& e) {
        json res = json::array();
        for (double r : e.residuals()) res.push_back(number(r));
        outcome.report["error"] = e.what();
        outcome.report["residuals"] = res;
        outcome.code = check_failed;
      }
    } else if (diagnostic->parsed()) {
      name = "diagnostic";
      const auto S = make_generator(gen);
      const auto f = load_parametric(forcing_path);
      DiagnosticOptions o;
      o.tail_tol = tail_tol;
      o.density = density;
      std::optional<MildSolution> u;
      const bool needs_u = !(f.lipschitz_constant() && *f.lipschitz_constant() == 0.0);
      if (needs_u) {
        PicardOptions po = picard;
        po.t0 = -history;
        po.t1 = l + 1.0;
        u = picard_solve(S, f, po);
      }
      const auto d = translation_diagnostic(f, u ? &*u : nullptr, tau, p, l, delta1, gamma, o);
      outcome.report = {{"subcommand", name}, {"forcing", f.label()}, {"generator", generator_json(S)},
                        {"tau", number(tau)}, {"p", number(p)}, {"l", number(l)},
                        {"delta1", number(delta1)}, {"gamma", number(gamma)}, {"diagnostic", to_json(d)}};
    } else if (verify_paper->parsed()) {
      name = "verify-paper";
      VerifyConfig cfg;
      cfg.seed = seed;
      cfg.probes = probes;
      const auto reports = verify_all(cfg);
      json cases = json::array();
      bool all = true;
      for (const auto& r : reports) {
        cases.push_back(to_json(r));
        all = all && r.passed();
        for (const auto& [stem, table] : r.tables) write_csv(dir / "verify" / (stem + ".csv"), table.header, table.rows);
      }
      outcome.report = {{"subcommand", name}, {"seed", seed}, {"probes", probes}, {"passed", all}, {"cases", cases}};
      if (!all) outcome.code = check_failed;
    }
  } catch (const SpecError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const NotConverged& e) {
    err << "error: " << e.what() << '\n';
    return check_failed;
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return config_error;
  }

  write_json(dir / (file_stem(name) + ".json"), outcome.report);
  out << outcome.report.dump(2) << '\n';
  return outcome.code;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace weylap::cli
