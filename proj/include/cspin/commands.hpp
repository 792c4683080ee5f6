// commands.hpp: subcommands of the cspin command-line tool
//
// Exit codes: 0 success, 2 configuration error, 3 numerical pathology (output still
// written, offending rows flagged), 4 validation failure.

#pragma once

#include <iosfwd>

#include "cspin/config.hpp"
#include "cspin/table.hpp"

namespace cspin {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitPathology = 3;
inline constexpr int kExitValidation = 4;

struct CommandResult {
    Table table;
    int exit_code{kExitOk};
    std::string summary; // printed on the diagnostic stream when non-empty
};

CommandResult cmd_evolve(const RunConfig& cfg);
CommandResult cmd_rates(const RunConfig& cfg);
CommandResult cmd_thermo(const RunConfig& cfg);
CommandResult cmd_resonance(const RunConfig& cfg);
CommandResult cmd_average(const RunConfig& cfg);
CommandResult cmd_trapping(const RunConfig& cfg);
CommandResult cmd_validate(const RunConfig& cfg);
CommandResult cmd_sweep(const RunConfig& cfg);

// Full front end: argument parsing, config loading, environment overrides, dispatch
// and output. Tables go to --out (or stdout), diagnostics to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace cspin
