// Implementations behind the CLI subcommands. Each command writes one
// machine-readable table (CSV or JSON) with the embedded run config.

#pragma once

#include <ostream>

#include "openrabi/run_config.hpp"

namespace openrabi {

void cmd_spectrum(const RunConfig& cfg, std::ostream& out);
void cmd_dynamics(const RunConfig& cfg, std::ostream& out);
void cmd_steady(const RunConfig& cfg, std::ostream& out);
void cmd_modemap(const RunConfig& cfg, std::ostream& out);
void cmd_jc(const RunConfig& cfg, std::ostream& out);
void cmd_fullcmp(const RunConfig& cfg, std::ostream& out);

// Validates and dispatches on cfg.subcommand.
void run_command(const RunConfig& cfg, std::ostream& out);

// Recovers the embedded config from a previously written output (either
// format), enabling bit-for-bit reproduction of the payload.
RunConfig config_from_output(const std::string& file_contents);

}  // namespace openrabi
