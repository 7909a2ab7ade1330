#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "segsolve_cli/json_io.hpp"

namespace segsolve::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kAssumptionViolation = 3,
  kSolverFailure = 4,
  kTableMismatch = 5,
  kTheoremFailure = 6,
};

enum class Format { Json, Csv, Text };

struct RunConfig {
  std::string command;
  EconomyParams economy = example_params();
  bool example = true;  // economy is the built-in example
  std::vector<Mechanism> mechs{Mechanism::N, Mechanism::DA, Mechanism::TTC};
  std::string output;  // empty: stdout
  std::optional<Format> format;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  // sweeps
  double step = 0.1;
  Feasibility feasibility = Feasibility::Interior;
  std::vector<double> rho_list{0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  std::vector<double> q_list{0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  std::vector<double> pi_list{0.1, 0.2, 0.3, 0.4};
  CubeWealth wealth;
  // simulation
  std::size_t agents = 200000;
  std::size_t reps = 20;
  HousingRule housing = HousingRule::Clearing;
  // tables mutation hook
  std::optional<double> auction_price;
};

// Applies a run-config JSON object on top of `cfg`; throws ConfigError.
void apply_config(const Json& j, RunConfig& cfg);
// Inline JSON when the text starts with '{', otherwise a file path.
Json load_json_source(const std::string& text);

CubeWealth parse_wealth_rule(const std::string& text);
Format parse_format(const std::string& text);
std::vector<Mechanism> parse_mech_list(const std::string& text);

// Runs a command; data goes to `out` (or the output file), diagnostics to `err`.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Full command line: segsolve <command> [flags].
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace segsolve::cli
