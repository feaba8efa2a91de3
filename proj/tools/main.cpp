// argv -> CliInvocation plumbing; all behaviour lives in the library.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spinpair/cli.hpp"

using spinpair::CliInvocation;

namespace {

// Stores a parsed value under `key`, dashes stripped, so the library sees
// the same option map the tests build by hand.
void add_value(CLI::App* sub, CliInvocation& invocation, const std::string& flag,
               const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(
        flag, [&invocation, key](const std::string& value) { invocation.options[key] = value; },
        help);
}

void add_switch(CLI::App* sub, CliInvocation& invocation, const std::string& flag,
                const std::string& key, const std::string& help) {
    sub->add_flag_callback(
        flag, [&invocation, key] { invocation.options[key] = ""; }, help);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"encoded spin-pair qubits: verify the gate constructions, simulate pulse "
                 "schedules, compile circuits, estimate gate timing"};
    app.require_subcommand(1);
    CliInvocation invocation;

    CLI::App* verify = app.add_subcommand("verify", "run the gate-construction checks");
    verify->callback([&] { invocation.subcommand = "verify"; });
    add_value(verify, invocation, "--device", "device",
              "device JSON file (default: two-qubit demo register)");
    add_switch(verify, invocation, "--json", "json", "machine-readable report");

    CLI::App* simulate = app.add_subcommand("simulate", "evolve a schedule or a resonant pulse");
    simulate->callback([&] { invocation.subcommand = "simulate"; });
    add_value(simulate, invocation, "--schedule", "schedule", "schedule JSON file");
    add_value(simulate, invocation, "--pulse", "pulse", "synthesize an X pulse: pi or pi/2");
    add_value(simulate, invocation, "--jamp", "jamp",
              "modulation depth / resonance for --pulse (default 0.05)");
    add_value(simulate, invocation, "--device", "device",
              "device JSON file for --pulse (default: one-qubit demo register)");
    add_value(simulate, invocation, "--target", "target", "report fidelity vs a target: nand");
    add_value(simulate, invocation, "--trace", "trace", "write a time,leakage CSV here");

    CLI::App* compile = app.add_subcommand("compile", "lower a circuit to a pulse schedule");
    compile->callback([&] { invocation.subcommand = "compile"; });
    add_value(compile, invocation, "--circuit", "circuit", "circuit source file");
    add_value(compile, invocation, "--device", "device",
              "device JSON file (default: two-qubit demo register)");
    add_value(compile, invocation, "--delta-g", "delta-g", "timing model g-factor difference");
    add_value(compile, invocation, "--field-tesla", "field-tesla", "timing model field (T)");
    add_value(compile, invocation, "--j-mev", "j-mev", "timing model exchange scale (meV)");
    add_value(compile, invocation, "--ry-policy", "ry-policy",
              "ry lowering: composite (default) or resonant");
    add_value(compile, invocation, "--out", "out", "write the schedule JSON here");

    CLI::App* estimate = app.add_subcommand("estimate", "print the gate-duration model");
    estimate->callback([&] { invocation.subcommand = "estimate"; });
    add_value(estimate, invocation, "--delta-g", "delta-g", "g-factor difference (default 1)");
    add_value(estimate, invocation, "--field-tesla", "field-tesla", "field in tesla (default 1)");
    add_value(estimate, invocation, "--j-mev", "j-mev", "exchange scale in meV (default 1)");
    add_value(estimate, invocation, "--preset", "preset", "named scenario: si-ge");
    add_switch(estimate, invocation, "--json", "json", "machine-readable report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? spinpair::kExitOk : spinpair::kExitUsage;
    }
    return spinpair::run_cli(invocation, std::cout, std::cerr);
}
