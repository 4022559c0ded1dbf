#ifndef QUAKESIM_CLI_HPP
#define QUAKESIM_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace quakesim {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitSaturation = 2,
  kExitSelftest = 3,
};

/// Runs one CLI invocation. `args` excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

/// Example-based checks of a build; prints one line per check.
int run_selftest(std::ostream& out);

}  // namespace quakesim

#endif  // QUAKESIM_CLI_HPP
