#ifndef AAQ_CLI_HPP
#define AAQ_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace aaq {

// Command-line driver. `args` holds the arguments after the program name,
// in order. Results go to `out`, diagnostics to `err`. Returns the process
// exit code:
//
//   0  sentence true, or generic success
//   1  sentence false (decide subcommand only)
//   2  usage or input error
//   3  resource limit exceeded
//
// Identical invocations produce byte-identical standard output; anything
// timing-dependent is written to `err` only.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace aaq

#endif  // AAQ_CLI_HPP
