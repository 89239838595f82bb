#ifndef SBGP_HARNESS_CLI_HPP
#define SBGP_HARNESS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace sbgp::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInternalError = 2;

// Entry point of the `sbgp` command line tool. Subcommands: extract,
// evaluate-id, evaluate-verify, bench, perturb, labels, synth. Results go to
// --out when given, otherwise to `out`; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sbgp::harness

#endif  // SBGP_HARNESS_CLI_HPP
