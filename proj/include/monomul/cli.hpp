#pragma once

#include <iosfwd>
#include <string>
#include <vector>

// Command-line front end. Parsing and execution are separated from main() so
// tests can drive full runs in-process and capture the exact byte output.

namespace monomul::cli {

// Runs one invocation. argv[0] is the program name. Returns the process exit
// code: 0 success, 1 failed selftest criteria, 2 invalid input, 3 numerical
// failure. Errors are emitted as a JSON object on err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Convenience wrapper for tests: args without the program name.
int run_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace monomul::cli
