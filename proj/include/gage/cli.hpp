#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace gage {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNumerical = 3,
};

/// Runs the command line `gage <subcommand> ...`; `args` excludes the program
/// name. Every subcommand that writes a file also writes `<file>.manifest.json`.
int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace gage
