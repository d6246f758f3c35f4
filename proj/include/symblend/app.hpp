#pragma once

#include <string>

#include "symblend/io.hpp"

namespace symblend {

// A report is {"command", "config", "passed", "result"}; the config echo carries every input inline,
// so the same (command, config) always reproduces the same bytes.
Json run_command(const std::string& command, const Json& config);

// Canonical serialization used for files and for byte comparison during replay.
std::string report_text(const Json& report);

// CSV companion output for commands that have one (attractor boxes, invariant-graph rows); empty otherwise.
std::string report_csv(const Json& report);

int run_cli(int argc, char** argv);

}  // namespace symblend
