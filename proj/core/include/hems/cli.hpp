#pragma once

#include <string>
#include <vector>

namespace hems {

/// Entry point shared by the `hems` binary and the integration tests.
/// Subcommands: simulate, sweep, check, oracle, gen-trace.
/// Returns 0 on success, 1 on validation errors, 2 on runtime errors.
int run_command(const std::vector<std::string>& args);

}  // namespace hems
