// Command-line front end: verification, simulation, compilation, estimation.
//
// The binary in tools/ parses argv into a CliInvocation and hands it to
// run_cli; tests drive run_cli directly with option maps and string streams.
// Exit codes are a stable contract: 0 success, 1 failed check or
// non-convergent integration, 2 malformed input (flags, files, parsing).
#pragma once

#include <iosfwd>
#include <map>
#include <string>

namespace spinpair {

struct CliInvocation {
    std::string subcommand;  // verify | simulate | compile | estimate
    // Flag values keyed without the leading dashes; bare switches map to "".
    std::map<std::string, std::string> options;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

// Dispatches one invocation.  Reports go to `out`, diagnostics to `err`;
// every failure is converted to an exit code, nothing escapes.
//
//   verify    [--device FILE] [--json]
//             Runs the gate-construction checks on a four-spin register
//             (default: the two-qubit demo device, g = 1/1.5, B = 1 T) and
//             prints a table or a JSON report.  Devices with an unsplit pair
//             report the splitting-dependent checks as skipped-impossible.
//   simulate  (--schedule FILE | --pulse pi|pi/2 [--jamp RATIO]
//             [--device FILE]) [--target nand] [--trace FILE]
//             Evolves a schedule file or a synthesized resonant pulse,
//             reporting leakage, convergence, and fidelity; --trace writes a
//             time,leakage CSV.
//   compile   --circuit FILE [--device FILE] [--delta-g X]
//             [--field-tesla X] [--j-mev X] [--ry-policy composite|resonant]
//             [--out FILE]
//             Lowers a circuit to a schedule document; stats are printed and
//             the JSON goes to --out (or to `out`, with stats on `err`).
//   estimate  [--preset si-ge] [--delta-g X] [--field-tesla X] [--j-mev X]
//             [--json]
//             Prints pi-rotation durations, the two-qubit gate duration and
//             the derived clock next to the si-ge reference scenario.
int run_cli(const CliInvocation& invocation, std::ostream& out, std::ostream& err);

}  // namespace spinpair
