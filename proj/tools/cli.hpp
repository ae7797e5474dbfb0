#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hyperfa::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 2,  // I/O, schema and argument errors
  kFitError = 3,    // every start (or every grid cell) failed
};

/// Runs one command line (args excludes the program name) and returns the
/// exit status. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyperfa::cli
