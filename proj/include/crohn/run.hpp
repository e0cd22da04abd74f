#pragma once

#include <exception>
#include <optional>
#include <ostream>
#include <string_view>

#include "crohn/config.hpp"

namespace crohn {

enum class Command { Steady, Stability, Dispersion, Simulate, Scan };

std::optional<Command> command_from_name(std::string_view name);

/// Executes one subcommand: prints a summary to `out` and writes its files
/// plus `manifest.txt` under cfg.out_dir. Library errors propagate.
void run(Command cmd, const RunConfig& cfg, std::ostream& out);

/// Process exit status for an error escaping run(): 1 for configuration or
/// validation problems, 2 for runtime invariant violations and anything else.
int exit_code_for(const std::exception& e);

}  // namespace crohn
