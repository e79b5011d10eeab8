#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "skewdim/config.hpp"

namespace skewdim {

enum class OutputFormat { Default, Json, Csv };

struct CommandOptions {
  std::filesystem::path out = "out";
  OutputFormat format = OutputFormat::Default;
};

enum ExitCode { kExitOk = 0, kExitError = 1, kExitInconclusive = 2 };

const std::vector<std::string>& command_names();

// Runs one subcommand, writing artifacts under options.out and a short summary to `log`.
// Errors are reported on `err` and mapped to exit codes.
int run_command(const std::string& name, const RunConfig& config, const CommandOptions& options,
                std::ostream& log, std::ostream& err);

struct VerifyCheck {
  std::string name;
  std::string status;  // pass, fail or inconclusive
  double value = 0;
  double tolerance = 0;
  std::string detail;
};

// Invariant suite on the configured system, projection and first boundary point.
std::vector<VerifyCheck> verify_suite(const RunConfig& config);

// Configuration used by `verify` when no file is given: the F2 simple-random-walk fixture.
RunConfig default_verify_config();

}  // namespace skewdim
