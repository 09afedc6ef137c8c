#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace weylap::cli {

/// Defaults shared by every subcommand.
struct Defaults {
  static constexpr int density = 256;
  static constexpr double tol = 1e-4;
  static constexpr double l0 = 1.0;
  static constexpr double factor = 2.0;
  static constexpr int max_windows = 16;
  static constexpr const char* scan = "-5:5:0.01";
  static constexpr const char* tau = "0:50:0.01";
  static constexpr double dense_fraction = 0.25;
  static constexpr double tail_tol = 1e-6;
  static constexpr unsigned long long seed = 20240917;
  static constexpr int probes = 10000;
  static constexpr const char* output_env = "WEYLAP_OUTPUT_DIR";
};

enum ExitCode : int { ok = 0, check_failed = 1, config_error = 2 };

/// Parses args (args[0] is the program name), runs the subcommand, writes
/// reports under the output directory and prints the JSON report to out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace weylap::cli
