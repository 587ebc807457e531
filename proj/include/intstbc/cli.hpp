#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "intstbc/montecarlo.hpp"

namespace intstbc {

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_invalid = 2, exit_budget = 3 };

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Flat "key = value" lines, '#' comments. Keys are SimConfig field names.
std::map<std::string, std::string> parse_config_text(const std::string& text);

/// Applies parsed keys onto cfg. Unknown keys throw std::invalid_argument.
void apply_config(SimConfig& cfg, const std::map<std::string, std::string>& kv);

}  // namespace intstbc
