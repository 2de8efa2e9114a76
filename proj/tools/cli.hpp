#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace amparse {

enum ExitCode { kOk = 0, kUsage = 1, kIo = 2, kInternal = 3 };

/// Runs one command line; all output goes to the given streams.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace amparse
