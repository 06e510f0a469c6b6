#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace obm {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,       // bad flags, malformed input, parameter/regime mismatch
  kExitNonUniform = 3,  // observation grid is not uniform
  kExitOneSided = 4,    // one side never occupied; partial output written
};

/// Runs `obm <subcommand> ...`; args excludes the program name. Data goes to
/// `out` unless an --out file is given, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace obm
