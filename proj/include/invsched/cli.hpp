#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace invsched::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kEmptyInvariant = 2,
  kCapReached = 3,
  kSafetyViolation = 4,
  kNumericalFailure = 5,
};

/// Declarative run description. A JSON config file fills it; flags override.
struct RunConfig {
  /// "aps", "scalar", or a path to a system JSON file.
  std::string system = "aps";
  bool a32_zero = false;
  int j_max = 10;
  int max_iter = 50;
  std::int64_t horizon = 300;
  /// "periodic", "periodic:P", "max-sleep" or "@file.json".
  std::string schedule = "periodic";
  /// "zero", "uniform", "worst" or "meals@file.json".
  std::string disturbance = "uniform";
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  std::optional<std::string> c_inf_path;
  std::optional<int> alpha;
  std::vector<double> x0;
  bool dump_feasible_sets = false;
  bool gnuplot_script = false;
};

RunConfig config_from_json_file(const std::string& path);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace invsched::cli
