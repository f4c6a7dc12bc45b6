#pragma once

#include "tnls/config.hpp"

#include <exception>
#include <iosfwd>
#include <string>

namespace tnls {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

enum ExitCode { exit_ok = 0, exit_invariant = 1, exit_config = 2, exit_runtime = 3 };

// Exit status for an exception escaping a command.
int exit_code_for(const std::exception& e);

// Machine-readable error document.
std::string error_json(const std::string& command, const std::exception& e, int code);

// Runs the configured command, writes its report files into cfg.output_dir and returns the
// exit status. Progress lines go to `log`. Errors propagate as exceptions.
int run(const RunConfig& cfg, std::ostream& log);

// run() with errors converted to an exit status and an error.json in the output directory.
int run_reported(const RunConfig& cfg, std::ostream& log, std::ostream& err);

}  // namespace tnls
