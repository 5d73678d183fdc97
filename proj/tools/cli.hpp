#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nounclass::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,     // unknown command or flag, bad option value
  kIo = 2,        // missing or unwritable file
  kParse = 3,     // malformed input file
  kData = 4,      // inputs parse but cannot be processed
  kInternal = 5,
};

/// Runs one command line (without the program name). Results that are not
/// sent to a file go to `out`; diagnostics go to `err` as a single line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nounclass::cli
