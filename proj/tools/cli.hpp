#pragma once

// Command-line front end: train, run, convergence and compare.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cadweno/reconstruction.hpp"

namespace cadweno::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kBadArguments = 2,
  kUnknownProblem = 3,
  kUnknownScheme = 4,
  kMissingWeights = 5,
  kSolverFailure = 6,
  kIoFailure = 7,
};

class UnknownSchemeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class MissingWeightsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Schemes selectable with --scheme.
std::vector<std::string> scheme_names();

/// Default scheme set of `compare`.
std::vector<std::string> comparison_schemes();

/// Weight file for a learned scheme: the explicit path if given, then
/// $CADWENO_WEIGHTS_DIR/<file>, then the bundled weights directory.
std::filesystem::path resolve_weights(const std::string& scheme, const std::optional<std::filesystem::path>& explicit_path,
                                      const std::optional<std::filesystem::path>& weights_dir = {});

/// Throws UnknownSchemeError or MissingWeightsError.
WeightingStrategy make_scheme(const std::string& name, const std::optional<std::filesystem::path>& weights = {},
                              const std::optional<std::filesystem::path>& weights_dir = {});

/// Runs the CLI in-process and returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cadweno::cli
