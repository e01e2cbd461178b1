#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "run_spec.hpp"

namespace tzone::app {

/// Builds the RunSpec for a command line (arguments after the program
/// name). Precedence: flags over config file over defaults. Throws
/// CLI::ParseError or std::invalid_argument.
RunSpec parse_run_spec(const std::vector<std::string>& args);

/// Parses and runs one subcommand. Returns the process exit status:
/// 0 on success, 1 for failed acceptance criteria, 2 for invalid input
/// or runtime errors, CLI11's code for usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tzone::app
