#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wkam::cli {

/// Runs one subcommand. argv[0] is the program name. Returns the process
/// exit code: 0 success (or GRAPH), 1 operational error, 2 NOT_GRAPH /
/// NOT_EXACT / NOT_INVARIANT, 3 INCONCLUSIVE.
int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace wkam::cli
