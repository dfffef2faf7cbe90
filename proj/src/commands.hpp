#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "config.hpp"
#include "report.hpp"

namespace vekua::cli {

/// Residual and identity suite for the configured problem.
Report cmd_verify(const RunConfig& cfg);

/// Both Cauchy integrals of a named solution over a named closed curve.
/// Unknown names and open curves raise ConfigError.
Report cmd_cauchy(const RunConfig& cfg, const std::string& curve, const std::string& solution);

struct SequenceOutput {
  Report report;
  std::map<std::string, std::string> files;  // file name -> contents
};

/// Runs `steps` cycles of the solution sequence. A failing step ends the run
/// with a partial report.
SequenceOutput cmd_sequence(const RunConfig& cfg, int steps);

/// Writes every file of `out` into `dir` (created if needed) together with
/// report.json.
void write_sequence_output(const SequenceOutput& out, const std::filesystem::path& dir);

/// Exit code contract: 0 when every check passed, 1 otherwise.
inline int exit_code(const Report& r) { return r.passed() ? 0 : 1; }

}  // namespace vekua::cli
