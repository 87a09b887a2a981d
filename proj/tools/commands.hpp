#pragma once

#include "config.hpp"

#include "nlspec/errors.hpp"
#include "nlspec/spectra.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nlspec::app {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitThreshold = 2, kExitSolver = 3 };

int exit_code_for(ErrorKind kind);

/// Process-level settings taken from the environment.
///   NLSPEC_OUTPUT_DIR  replaces output.dir
///   NLSPEC_THREADS     worker threads for the eigensolvers (default 1)
struct Environment {
  std::optional<std::string> output_dir;
  int threads = 1;

  static Environment from_process();
  std::string resolve_output_dir(const RunConfig& c) const;
};

struct CommandResult {
  int exit_code = kExitOk;
  Json report;
  /// (file name relative to the output directory, contents)
  std::vector<std::pair<std::string, std::string>> files;
};

CommandResult cmd_symbol_verify(const RunConfig& c, const Environment& env);
CommandResult cmd_predict(const RunConfig& c, const Environment& env);
CommandResult cmd_eigs(const RunConfig& c, const Environment& env);
/// Uses the spectrum file when given, otherwise solves for the configured domain.
CommandResult cmd_trace_fit(const RunConfig& c, const Environment& env, const std::optional<std::string>& spectrum_path);
CommandResult cmd_weyl(const RunConfig& c, const Environment& env, const std::optional<std::string>& spectrum_path);
/// Spectrum path from the argument or hear.spectrum; lame and hear.n from the config.
CommandResult cmd_hear(const RunConfig& c, const Environment& env, const std::optional<std::string>& spectrum_path);

/// Solves for the configured domain, boundary condition and solver settings.
Spectrum compute_spectrum(const RunConfig& c, const Environment& env);

/// Writes the report (if json is enabled) and the extra files atomically under the output directory.
/// Returns the paths written.
std::vector<std::string> write_outputs(const std::string& command, const CommandResult& result, const RunConfig& c,
                                       const Environment& env);

}  // namespace nlspec::app
