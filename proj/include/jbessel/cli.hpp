// Command-line front end: coeffs | eval | zeros | verify | conjecture.
#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "jbessel/coefficients.hpp"

namespace jbessel {

enum class OutputFormat { json, csv };

struct RunConfig {
  std::string command;
  RawParams params;
  CoefficientSource source = CoefficientSource::recurrence;
  std::vector<Perturbation> perturbations;
  std::size_t n = 50;                     ///< coefficients (coeffs)
  std::optional<std::size_t> zeros;       ///< zero count; kernel M for verify
  std::optional<std::size_t> gram_size;
  std::optional<std::size_t> quad_m;
  std::optional<double> tol;
  std::vector<double> z;                  ///< eval points
  OutputFormat format = OutputFormat::json;
  std::string out;                        ///< empty: stdout
};

/// Exit codes of run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitError = 2;

/// Parses argv (flags override --config key=value files), runs the command
/// and writes the report to --out or `out`. Every failure, including bad
/// flags, is reported as a JSON error object. Returns 0 iff nothing failed.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs an already parsed configuration and returns the report text and
/// exit code.
struct CommandResult {
  std::string text;
  int exit_code = kExitOk;
};
CommandResult run_command(const RunConfig& config);

}  // namespace jbessel
