#pragma once

#include <ostream>

namespace sgce {

// Runs the command-line front end. Returns the process exit status: 0 on
// success, 2 for a missing prerequisite artifact, 3 for any other failure.
// Failures print one JSON object {"error", "message"} to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sgce
