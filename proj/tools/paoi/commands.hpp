#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "paoi/emit.hpp"
#include "paoi/scenario.hpp"

namespace paoi::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalidInput = 1,
  kExitInfeasible = 2,
  kExitCheckFailed = 3,
};

struct RunOptions {
  std::string subcommand;
  std::string config_path;  // empty: built-in example (reproduce only)
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<OutputFormat> format;
  std::optional<int> precision;
  std::optional<double> tolerance;  // relative residual tolerance for verify
  bool grid_oracle = false;
  bool no_timestamp = false;
};

inline constexpr double kDefaultVerifyTolerance = 1e-9;

// Each builder throws ScenarioError or std::invalid_argument for unusable input.
ResultRecord analytic_record(const ScenarioConfig& cfg);
ResultRecord simulate_record(const ScenarioConfig& cfg);
ResultRecord optimize_record(const ScenarioConfig& cfg, bool grid_oracle);
ResultRecord verify_record(const ScenarioConfig& cfg, double tolerance);
ResultRecord reproduce_record();

/// Loads the config, runs the subcommand, writes the output and returns the exit code.
int run(const RunOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace paoi::cli
