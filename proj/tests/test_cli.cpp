#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "spinpair/cli.hpp"
#include "spinpair/compiler.hpp"

using namespace spinpair;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult run(const std::string& subcommand, std::map<std::string, std::string> options) {
    CliInvocation invocation;
    invocation.subcommand = subcommand;
    invocation.options = std::move(options);
    std::ostringstream out, err;
    const int code = run_cli(invocation, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = temp_path(name);
    std::ofstream file(path, std::ios::binary);
    REQUIRE(file.good());
    file << content;
    return path;
}

// Number following `label` in a report.
double value_after(const std::string& text, const std::string& label) {
    const auto pos = text.find(label);
    REQUIRE(pos != std::string::npos);
    return std::stod(text.substr(pos + label.size()));
}

size_t count_occurrences(const std::string& text, const std::string& needle) {
    size_t count = 0;
    for (auto pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++count;
    return count;
}

const char* kFlatDevice =
    R"({"n_spins": 4, "g_factors": [1, 1, 1, 1], "field_tesla": 1.0,
        "bonds": [[1, 2, 1.0], [2, 3, 1.0], [3, 4, 1.0]], "layout": "longitudinal-1d"})";

const char* kThreeQubitDevice =
    R"({"n_spins": 6, "g_factors": [1, 1.5, 1, 1.5, 1, 1.5], "field_tesla": 1.0,
        "bonds": [[1, 2, 1.0], [3, 4, 1.0], [5, 6, 1.0], [2, 3, 1.0], [4, 5, 1.0]],
        "layout": "longitudinal-1d"})";

}  // namespace

TEST_CASE("verify passes every check on the demo device") {
    const CliResult result = run("verify", {});
    CHECK(result.code == kExitOk);
    CHECK(count_occurrences(result.out, "pass") >= 7);
    CHECK(result.out.find("physical-controlled-phase") != std::string::npos);
    CHECK(result.out.find("encoded-leakage") != std::string::npos);
    CHECK(result.out.find("encoded-fidelity") != std::string::npos);
    CHECK(result.out.find("sigma-x-mapping") != std::string::npos);
    CHECK(result.out.find("sigma-z-mapping") != std::string::npos);
    CHECK(result.out.find("leakage-witness") != std::string::npos);
    CHECK(result.out.find("calibration") != std::string::npos);
    CHECK(result.out.find("result: 7 passed, 0 failed, 0 skipped-impossible") !=
          std::string::npos);
}

TEST_CASE("verify --json mirrors the table and parses back") {
    const CliResult table = run("verify", {});
    const CliResult json = run("verify", {{"json", ""}});
    CHECK(json.code == table.code);

    const nlohmann::json report = nlohmann::json::parse(json.out);
    CHECK(report.at("all_passed").get<bool>());
    const auto& checks = report.at("checks");
    REQUIRE(checks.size() == 7);
    size_t json_passes = 0;
    for (const auto& check : checks)
        if (check.at("status").get<std::string>() == "pass") ++json_passes;
    CHECK(json_passes == 7);

    for (const auto& check : checks) {
        const std::string name = check.at("name").get<std::string>();
        if (name == "encoded-leakage")
            CHECK(check.at("values").at("leakage").get<double>() <= 1e-10);
        if (name == "encoded-fidelity")
            CHECK(check.at("values").at("fidelity").get<double>() >= 1.0 - 1e-10);
        if (name == "sigma-z-mapping")
            CHECK(check.at("values").at("coefficient").get<double>() ==
                  doctest::Approx(-0.5).epsilon(1e-12));
        if (name == "leakage-witness")
            CHECK(check.at("values").at("amplitude_re").get<double>() ==
                  doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("verify reports splitting-dependent checks as impossible on a flat device") {
    const std::string path = write_temp("spinpair_cli_flat_device.json", kFlatDevice);
    const CliResult result = run("verify", {{"device", path}});
    CHECK(result.code == kExitCheckFailed);
    CHECK(count_occurrences(result.out, "skipped-impossible") >= 4);
    CHECK(result.out.find("result: 3 passed, 0 failed, 4 skipped-impossible") !=
          std::string::npos);

    const CliResult json = run("verify", {{"device", path}, {"json", ""}});
    CHECK(json.code == kExitCheckFailed);
    const nlohmann::json report = nlohmann::json::parse(json.out);
    CHECK_FALSE(report.at("all_passed").get<bool>());
    for (const auto& check : report.at("checks")) {
        const std::string name = check.at("name").get<std::string>();
        const std::string status = check.at("status").get<std::string>();
        if (name == "sigma-x-mapping" || name == "leakage-witness" || name == "calibration")
            CHECK(status == "pass");
        else
            CHECK(status == "skipped-impossible");
    }
}

TEST_CASE("verify rejects unusable inputs") {
    CHECK(run("verify", {{"device", temp_path("spinpair_cli_missing.json")}}).code == kExitUsage);
    CHECK(run("verify", {{"bogus", "1"}}).code == kExitUsage);
    const std::string two_spin = write_temp(
        "spinpair_cli_two_spin.json",
        R"({"n_spins": 2, "g_factors": [1, 1.5], "field_tesla": 1.0,
            "bonds": [[1, 2, 1.0]], "layout": "longitudinal-1d"})");
    const CliResult result = run("verify", {{"device", two_spin}});
    CHECK(result.code == kExitUsage);
    CHECK(result.err.find("four-spin") != std::string::npos);
}

TEST_CASE("simulate synthesizes a pi pulse and writes a leakage trace") {
    const std::string trace = temp_path("spinpair_cli_trace.csv");
    const CliResult result =
        run("simulate", {{"pulse", "pi"}, {"jamp", "0.05"}, {"trace", trace}});
    REQUIRE(result.code == kExitOk);
    CHECK(value_after(result.out, "rotating-frame X(pi) fidelity: ") >= 0.99);
    CHECK(value_after(result.out, "final leakage: ") <= 1e-2);
    CHECK(value_after(result.out, "convergence estimate: ") < 1e-6);
    CHECK(result.out.find("trace written: ") != std::string::npos);

    std::ifstream file(trace);
    REQUIRE(file.good());
    std::string header;
    std::getline(file, header);
    CHECK(header == "time,leakage");
    std::string first_row;
    std::getline(file, first_row);
    CHECK(first_row.find(',') != std::string::npos);
}

TEST_CASE("compiled nand schedules simulate back to the gate") {
    const std::string circuit = write_temp("spinpair_cli_nand.circuit", "qubits 2\nnand q0 q1\n");
    const std::string schedule = temp_path("spinpair_cli_nand.schedule.json");
    const CliResult compiled =
        run("compile", {{"circuit", circuit}, {"out", schedule}});
    REQUIRE(compiled.code == kExitOk);
    CHECK(compiled.out.find("exchange ops:    2") != std::string::npos);
    CHECK(compiled.out.find("schedule written: ") != std::string::npos);

    const CliResult simulated = run("simulate", {{"schedule", schedule}, {"target", "nand"}});
    REQUIRE(simulated.code == kExitOk);
    CHECK(value_after(simulated.out, "fidelity vs nand: ") >= 1.0 - 1e-6);
    CHECK(value_after(simulated.out, "final leakage: ") <= 1e-10);
}

TEST_CASE("compile without --out streams the document and keeps stats on err") {
    const std::string circuit = write_temp("spinpair_cli_rx.circuit", "qubits 1\nrx q0 pi/2\n");
    const CliResult result = run("compile", {{"circuit", circuit}});
    REQUIRE(result.code == kExitOk);
    CHECK(result.err.find("exchange ops:    1") != std::string::npos);
    const ScheduleDocument doc = parse_schedule(result.out);
    CHECK(doc.segments.size() == 1);
}

TEST_CASE("simulate rejects malformed requests") {
    const std::string empty = write_temp("spinpair_cli_empty.json", "");
    const CliResult no_content = run("simulate", {{"schedule", empty}});
    CHECK(no_content.code == kExitUsage);
    CHECK(no_content.err.find("schedule") != std::string::npos);

    CHECK(run("simulate", {}).code == kExitUsage);
    CHECK(run("simulate", {{"schedule", empty}, {"pulse", "pi"}}).code == kExitUsage);
    CHECK(run("simulate", {{"pulse", "2pi"}}).code == kExitUsage);
    CHECK(run("simulate", {{"pulse", "pi"}, {"jamp", "fast"}}).code == kExitUsage);
    const std::string missing = temp_path("spinpair_cli_absent.json");
    CHECK(run("simulate", {{"schedule", missing}}).code == kExitUsage);
}

TEST_CASE("simulate rejects a nand target off the two-qubit register") {
    const CliResult result =
        run("simulate", {{"pulse", "pi"}, {"target", "nand"}});
    CHECK(result.code == kExitUsage);
    CHECK(result.err.find("two-qubit") != std::string::npos);
    CHECK(run("simulate", {{"pulse", "pi"}, {"target", "cnot"}}).code == kExitUsage);
}

TEST_CASE("compile surfaces parse and lowering errors with line numbers") {
    CHECK(run("compile", {}).code == kExitUsage);

    const std::string bad = write_temp("spinpair_cli_bad.circuit", "qubits 1\nfoo q0\n");
    const CliResult unknown_gate = run("compile", {{"circuit", bad}});
    CHECK(unknown_gate.code == kExitUsage);
    CHECK(unknown_gate.err.find("line 2") != std::string::npos);

    const std::string device = write_temp("spinpair_cli_three.json", kThreeQubitDevice);
    const std::string skip = write_temp("spinpair_cli_skip.circuit", "qubits 3\nnand q0 q2\n");
    const CliResult non_adjacent = run("compile", {{"circuit", skip}, {"device", device}});
    CHECK(non_adjacent.code == kExitUsage);
    CHECK(non_adjacent.err.find("line 2") != std::string::npos);
    CHECK(non_adjacent.err.find("adjacent") != std::string::npos);

    const std::string rz = write_temp("spinpair_cli_rz.circuit", "qubits 1\nrz q0 pi\n");
    const CliResult unsplit = run("compile", {{"circuit", rz}, {"delta-g", "0"}});
    CHECK(unsplit.code == kExitUsage);
    CHECK(unsplit.err.find("impossible") != std::string::npos);
}

TEST_CASE("estimate reports the quoted coefficients and the si-ge scenario") {
    const CliResult result = run("estimate", {});
    REQUIRE(result.code == kExitOk);
    CHECK(result.out.find("si-ge reference") != std::string::npos);
    CHECK(value_after(result.out, "t_z(pi) (ps)") == doctest::Approx(35.0));
    CHECK(value_after(result.out, "t_x(pi) (ps)") == doctest::Approx(0.5));
    CHECK(result.out.find("discrepancy flagged") != std::string::npos);

    const CliResult preset = run("estimate", {{"preset", "si-ge"}});
    REQUIRE(preset.code == kExitOk);
    CHECK(std::abs(value_after(preset.out, "t_z(pi) (ps)") - 40.23) < 0.01);
}

TEST_CASE("estimate --json parses back into the model values exactly") {
    const CliResult result = run("estimate", {{"preset", "si-ge"}, {"json", ""}});
    REQUIRE(result.code == kExitOk);
    const nlohmann::json report = nlohmann::json::parse(result.out);

    TimingModel si_ge;
    si_ge.delta_g = 0.435;
    si_ge.h_ext_tesla = 2.0;
    const auto& requested = report.at("requested");
    CHECK(requested.at("t_z_pi_ps").get<double>() == duration_z(kPi, si_ge));
    CHECK(requested.at("t_x_pi_ps").get<double>() == duration_x(kPi, si_ge));
    const ClockEstimate clock = estimate_clock(si_ge);
    CHECK(requested.at("nand_duration_ps").get<double>() == clock.nand_duration_ps);
    CHECK(requested.at("clock_ghz").get<double>() == clock.clock_ghz);
    CHECK(requested.at("reference_clock_ghz").get<double>() == 6.0);
    CHECK(requested.at("discrepancy_flagged").get<bool>() == clock.discrepancy_flagged);
    // the preset run's requested scenario IS the reference scenario
    CHECK(report.at("reference") == requested);
}

TEST_CASE("estimate rejects impossible parameters") {
    CHECK(run("estimate", {{"field-tesla", "0"}}).code == kExitUsage);
    CHECK(run("estimate", {{"delta-g", "0"}}).code == kExitUsage);
    CHECK(run("estimate", {{"preset", "ge-si"}}).code == kExitUsage);
    CHECK(run("estimate", {{"delta-g", "plenty"}}).code == kExitUsage);
}

TEST_CASE("unknown subcommands exit with the usage code") {
    const CliResult result = run("calibrate", {});
    CHECK(result.code == kExitUsage);
    CHECK(result.err.find("unknown subcommand") != std::string::npos);
}
