#include "spinpair/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinpair/compiler.hpp"
#include "spinpair/dynamics.hpp"
#include "spinpair/encoding.hpp"
#include "spinpair/gates.hpp"
#include "spinpair/linalg.hpp"
#include "spinpair/spin_system.hpp"

namespace spinpair {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Shortest representation that parses back to the same double.
std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

std::string fmt(double value, int precision = 12) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.*g", precision, value);
    return buffer;
}

std::string slurp(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open " + path);
    std::ostringstream text;
    text << file.rdbuf();
    return text.str();
}

const std::string* option_value(const CliInvocation& invocation, const std::string& key) {
    const auto it = invocation.options.find(key);
    return it == invocation.options.end() ? nullptr : &it->second;
}

void reject_unknown(const CliInvocation& invocation,
                    std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : invocation.options) {
        bool known = false;
        for (const char* name : allowed) known = known || key == name;
        if (!known)
            throw std::invalid_argument("unknown option --" + key + " for subcommand " +
                                        invocation.subcommand);
    }
}

double parse_double_option(const std::string& key, const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(value))
        throw std::invalid_argument("--" + key + ": not a finite number: '" + text + "'");
    return value;
}

DeviceConfig device_from_options(const CliInvocation& invocation, int default_qubits) {
    if (const std::string* path = option_value(invocation, "device"))
        return load_device(*path);
    return make_layout(Layout::longitudinal_1d, default_qubits);
}

// ---------- verify ----------

struct CheckRow {
    std::string name;
    std::string status;  // pass | fail | skipped-impossible
    std::string display;
    std::map<std::string, double> values;
};

CheckRow skipped(const std::string& name) {
    return {name, "skipped-impossible", "needs a split pair (delta_g * B != 0)", {}};
}

std::string verify_json(const std::vector<CheckRow>& rows, bool all_passed) {
    std::ostringstream text;
    text << "{\n  \"all_passed\": " << (all_passed ? "true" : "false") << ",\n  \"checks\": [";
    for (size_t r = 0; r < rows.size(); ++r) {
        text << (r == 0 ? "\n" : ",\n");
        text << "    {\n";
        text << "      \"name\": \"" << rows[r].name << "\",\n";
        text << "      \"status\": \"" << rows[r].status << "\",\n";
        text << "      \"values\": {";
        size_t v = 0;
        for (const auto& [key, value] : rows[r].values) {
            text << (v++ == 0 ? "\n" : ",\n");
            text << "        \"" << key << "\": " << format_double(value);
        }
        text << (v == 0 ? "}" : "\n      }") << "\n";
        text << "    }";
    }
    text << "\n  ]\n}\n";
    return text.str();
}

int run_verify(const CliInvocation& invocation, std::ostream& out) {
    reject_unknown(invocation, {"device", "json"});
    const DeviceConfig device = device_from_options(invocation, 2);
    if (device.n_spins != 4)
        throw std::invalid_argument("verify needs a four-spin two-qubit device (got n_spins = " +
                                    std::to_string(device.n_spins) + ")");
    const double b = device.field_tesla;
    const bool split = std::abs(device.delta_g(1) * b) >= 1e-12 &&
                       std::abs(device.delta_g(2) * b) >= 1e-12;

    std::vector<CheckRow> rows;

    if (!split) {
        rows.push_back(skipped("physical-controlled-phase"));
    } else {
        const EquivalenceReport rep =
            compare_up_to_global_phase(build_nand_physical(), controlled_phase_target());
        const bool ok = rep.fidelity >= 1.0 - 1e-10;
        rows.push_back({"physical-controlled-phase", ok ? "pass" : "fail",
                        "fidelity " + fmt(rep.fidelity) + " (needs >= 1 - 1e-10)",
                        {{"fidelity", rep.fidelity}}});
    }

    if (!split) {
        rows.push_back(skipped("encoded-leakage"));
        rows.push_back(skipped("encoded-fidelity"));
    } else {
        const SubspaceBasis basis = logical_product_basis({{1, 2}, {3, 4}});
        const ControlledPhaseReport rep =
            verify_controlled_phase(build_nand_encoded(device), basis);
        const bool leak_ok = rep.leakage_norm <= 1e-10;
        rows.push_back({"encoded-leakage", leak_ok ? "pass" : "fail",
                        "leakage " + fmt(rep.leakage_norm, 3) + " (needs <= 1e-10)",
                        {{"leakage", rep.leakage_norm}}});
        const bool fid_ok = rep.fidelity_vs_nand >= 1.0 - 1e-10;
        rows.push_back({"encoded-fidelity", fid_ok ? "pass" : "fail",
                        "fidelity " + fmt(rep.fidelity_vs_nand) + ", residual Z (" +
                            fmt(rep.residual_local_z[0], 3) + ", " +
                            fmt(rep.residual_local_z[1], 3) + ") rad",
                        {{"fidelity", rep.fidelity_vs_nand},
                         {"residual_z_1", rep.residual_local_z[0]},
                         {"residual_z_2", rep.residual_local_z[1]}}});
    }

    {
        const SigmaDecomposition dec =
            logical_operators_from_restriction(heisenberg(4, 1, 2), 1, 2, 4);
        const bool ok = dec.axis == SpinAxis::X && std::abs(dec.coefficient - 1.0) <= 1e-12 &&
                        std::abs(dec.identity_shift + 0.25) <= 1e-12;
        rows.push_back({"sigma-x-mapping", ok ? "pass" : "fail",
                        "S1.S2 -> " + fmt(dec.coefficient) + " Sx + " +
                            fmt(dec.identity_shift) + " I (expect 1, -0.25)",
                        {{"coefficient", dec.coefficient},
                         {"identity_shift", dec.identity_shift}}});
    }

    if (!split) {
        rows.push_back(skipped("sigma-z-mapping"));
    } else {
        const double g1 = device.g_factors[0];
        const double g2 = device.g_factors[1];
        const Matrix pair_zeeman = g1 * b * spin_operator(4, 1, SpinAxis::Z) +
                                   g2 * b * spin_operator(4, 2, SpinAxis::Z);
        const SigmaDecomposition dec =
            logical_operators_from_restriction(pair_zeeman, 1, 2, 4);
        const double expected = (g1 - g2) * b;
        const bool ok = dec.axis == SpinAxis::Z && std::abs(dec.coefficient - expected) <= 1e-12;
        rows.push_back({"sigma-z-mapping", ok ? "pass" : "fail",
                        "pair Zeeman -> " + fmt(dec.coefficient) + " Sz + " +
                            fmt(dec.identity_shift) + " I (expect (g1-g2) B = " +
                            fmt(expected) + ")",
                        {{"coefficient", dec.coefficient},
                         {"expected", expected},
                         {"identity_shift", dec.identity_shift}}});
    }

    {
        const LeakageWitness witness = leakage_witness(2, 3, "1010");
        const bool ok = witness.out_label == "1100" &&
                        std::abs(witness.amplitude - Complex(0.5, 0.0)) <= 1e-12;
        rows.push_back({"leakage-witness", ok ? "pass" : "fail",
                        "<" + (witness.out_label.empty() ? std::string("none") : witness.out_label) +
                            "|S2.S3|1010> = " + fmt(witness.amplitude.real()) +
                            " (expect <1100|...> = 0.5)",
                        {{"amplitude_im", witness.amplitude.imag()},
                         {"amplitude_re", witness.amplitude.real()}}});
    }

    {
        const CalibrationConvention& conv = calibration();
        const bool ok = conv.exchange_sign == 1.0 && conv.delta_g_sign == 1.0 &&
                        conv.u0_angle_scale == 1.0 && conv.scan_fidelity >= 1.0 - 1e-10;
        rows.push_back({"calibration", ok ? "pass" : "fail",
                        "exchange " + fmt(conv.exchange_sign) + ", splitting " +
                            fmt(conv.delta_g_sign) + ", u0 scale " + fmt(conv.u0_angle_scale) +
                            ", scan fidelity " + fmt(conv.scan_fidelity),
                        {{"delta_g_sign", conv.delta_g_sign},
                         {"exchange_sign", conv.exchange_sign},
                         {"scan_fidelity", conv.scan_fidelity},
                         {"u0_angle_scale", conv.u0_angle_scale}}});
    }

    int passed = 0, failed = 0, skipped_count = 0;
    for (const CheckRow& row : rows) {
        if (row.status == "pass") ++passed;
        else if (row.status == "fail") ++failed;
        else ++skipped_count;
    }
    const bool all_passed = passed == static_cast<int>(rows.size());

    if (option_value(invocation, "json")) {
        out << verify_json(rows, all_passed);
    } else {
        out << std::left << std::setw(28) << "check" << std::setw(20) << "status"
            << "value" << "\n";
        for (const CheckRow& row : rows)
            out << std::left << std::setw(28) << row.name << std::setw(20) << row.status
                << row.display << "\n";
        out << "result: " << passed << " passed, " << failed << " failed, " << skipped_count
            << " skipped-impossible\n";
    }
    return all_passed ? kExitOk : kExitCheckFailed;
}

// ---------- simulate ----------

SubspaceBasis pair_tiling_basis(const DeviceConfig& device) {
    std::vector<std::pair<int, int>> pairs;
    for (int q = 1; q <= device.n_qubits(); ++q) pairs.emplace_back(2 * q - 1, 2 * q);
    return logical_product_basis(pairs);
}

int run_simulate(const CliInvocation& invocation, std::ostream& out) {
    reject_unknown(invocation, {"schedule", "pulse", "jamp", "device", "target", "trace"});
    const std::string* schedule_path = option_value(invocation, "schedule");
    const std::string* pulse_kind = option_value(invocation, "pulse");
    if ((schedule_path != nullptr) == (pulse_kind != nullptr))
        throw std::invalid_argument("simulate needs exactly one of --schedule or --pulse");

    PulseSchedule schedule;
    double pulse_angle = 0.0;
    if (schedule_path) {
        schedule = to_pulse_schedule(parse_schedule(slurp(*schedule_path)));
    } else {
        if (*pulse_kind == "pi") pulse_angle = kPi;
        else if (*pulse_kind == "pi/2") pulse_angle = kPi / 2.0;
        else throw std::invalid_argument("--pulse: expected pi or pi/2, got '" + *pulse_kind + "'");
        double ratio = 0.05;
        if (const std::string* jamp = option_value(invocation, "jamp"))
            ratio = parse_double_option("jamp", *jamp);
        const DeviceConfig device = device_from_options(invocation, 1);
        const double resonance = std::abs(device.delta_g(1) * device.field_tesla);
        if (resonance < 1e-12)
            throw std::invalid_argument(
                "qubit 1 has delta_g * B = 0; resonant pulses are impossible");
        schedule = synthesize_resonant_pulse(device, pulse_angle, ratio * resonance);
    }

    const SubspaceBasis basis = pair_tiling_basis(schedule.device);
    const SimulationResult result = evolve(schedule, &basis);

    out << "segments: " << schedule.segments.size() << "\n";
    out << "natural duration: " << fmt(schedule.total_duration()) << "\n";
    out << "integrator steps: " << result.step_count << "\n";
    out << "convergence estimate: " << fmt(result.convergence_estimate, 3) << "\n";
    out << "final leakage: " << fmt(leakage(result.final_unitary, basis), 3) << "\n";

    if (pulse_kind) {
        // Rotating-frame logical rotation vs the commanded X pulse.
        const Matrix rotated = rotating_frame(result.final_unitary, zeeman(schedule.device),
                                              schedule.zeeman_time());
        const Matrix restricted = restrict_to(rotated, basis.vectors);
        Matrix target = expm_hermitian(logical_sigmas().x, pulse_angle);
        if (schedule.device.n_qubits() > 1)
            target = kron(target, identity(1LL << (schedule.device.n_qubits() - 1)));
        const EquivalenceReport rep = compare_up_to_global_phase(restricted, target);
        out << "rotating-frame X(" << *pulse_kind << ") fidelity: " << fmt(rep.fidelity) << "\n";
    }

    if (const std::string* target = option_value(invocation, "target")) {
        if (*target != "nand")
            throw std::invalid_argument("--target: only 'nand' is supported, got '" + *target +
                                        "'");
        if (schedule.device.n_qubits() != 2)
            throw std::invalid_argument("--target nand needs a two-qubit (four-spin) device");
        const ControlledPhaseReport rep = verify_controlled_phase(result.final_unitary, basis);
        out << "fidelity vs nand: " << fmt(rep.fidelity_vs_nand) << "\n";
    }

    if (const std::string* trace_path = option_value(invocation, "trace")) {
        std::ofstream file(*trace_path, std::ios::binary);
        if (!file) throw std::invalid_argument("cannot write " + *trace_path);
        file << "time,leakage\n";
        for (const auto& [time, value] : result.leakage_trace)
            file << format_double(time) << "," << format_double(value) << "\n";
        out << "trace written: " << *trace_path << " (" << result.leakage_trace.size()
            << " samples)\n";
    }
    return kExitOk;
}

// ---------- compile ----------

void print_stats(const CompileStats& stats, std::ostream& where) {
    where << "exchange ops:    " << stats.exchange_op_count << "\n";
    where << "z evolutions:    " << stats.z_evolution_count << "\n";
    where << "resonant pulses: " << stats.resonant_pulse_count << "\n";
    where << "est. duration:   " << fmt(stats.total_duration_ps, 6) << " ps\n";
}

int run_compile(const CliInvocation& invocation, std::ostream& out, std::ostream& err) {
    reject_unknown(invocation,
                   {"circuit", "device", "delta-g", "field-tesla", "j-mev", "ry-policy", "out"});
    const std::string* circuit_path = option_value(invocation, "circuit");
    if (!circuit_path) throw std::invalid_argument("compile needs --circuit FILE");
    const LogicalCircuit circuit = parse_circuit(slurp(*circuit_path));
    const DeviceConfig device = device_from_options(invocation, 2);

    TimingModel timing = timing_from_device(device);
    if (const std::string* text = option_value(invocation, "delta-g"))
        timing.delta_g = parse_double_option("delta-g", *text);
    if (const std::string* text = option_value(invocation, "field-tesla"))
        timing.h_ext_tesla = parse_double_option("field-tesla", *text);
    if (const std::string* text = option_value(invocation, "j-mev"))
        timing.j_ex_mev = parse_double_option("j-mev", *text);

    LowerOptions options;
    if (const std::string* policy = option_value(invocation, "ry-policy")) {
        if (*policy == "composite") options.ry_policy = RyPolicy::composite;
        else if (*policy == "resonant") options.ry_policy = RyPolicy::resonant;
        else
            throw std::invalid_argument("--ry-policy: expected composite or resonant, got '" +
                                        *policy + "'");
    }

    const LoweredProgram program = lower(circuit, device, timing, options);
    const std::string text = export_schedule(make_document(program.schedule, program.stats));

    if (const std::string* out_path = option_value(invocation, "out")) {
        std::ofstream file(*out_path, std::ios::binary);
        if (!file) throw std::invalid_argument("cannot write " + *out_path);
        file << text;
        print_stats(program.stats, out);
        out << "schedule written: " << *out_path << "\n";
    } else {
        // Keep stdout parseable as a schedule document.
        print_stats(program.stats, err);
        out << text;
    }
    return kExitOk;
}

// ---------- estimate ----------

struct EstimateReport {
    TimingModel timing;
    double t_z_pi_ps = 0.0;
    double t_x_pi_ps = 0.0;
    ClockEstimate clock;
};

EstimateReport evaluate(const TimingModel& timing) {
    EstimateReport report;
    report.timing = timing;
    report.t_z_pi_ps = duration_z(kPi, timing);
    report.t_x_pi_ps = duration_x(kPi, timing);
    report.clock = estimate_clock(timing);
    return report;
}

void estimate_scenario_json(std::ostream& text, const EstimateReport& report) {
    text << "{\n";
    text << "    \"clock_ghz\": " << format_double(report.clock.clock_ghz) << ",\n";
    text << "    \"delta_g\": " << format_double(report.timing.delta_g) << ",\n";
    text << "    \"discrepancy_flagged\": "
         << (report.clock.discrepancy_flagged ? "true" : "false") << ",\n";
    text << "    \"field_tesla\": " << format_double(report.timing.h_ext_tesla) << ",\n";
    text << "    \"j_mev\": " << format_double(report.timing.j_ex_mev) << ",\n";
    text << "    \"nand_duration_ps\": " << format_double(report.clock.nand_duration_ps) << ",\n";
    text << "    \"reference_clock_ghz\": " << format_double(report.clock.reference_clock_ghz)
         << ",\n";
    text << "    \"t_x_pi_ps\": " << format_double(report.t_x_pi_ps) << ",\n";
    text << "    \"t_z_pi_ps\": " << format_double(report.t_z_pi_ps) << "\n";
    text << "  }";
}

int run_estimate(const CliInvocation& invocation, std::ostream& out) {
    reject_unknown(invocation, {"delta-g", "field-tesla", "j-mev", "preset", "json"});
    TimingModel timing;
    if (const std::string* preset = option_value(invocation, "preset")) {
        if (*preset != "si-ge")
            throw std::invalid_argument("unknown preset '" + *preset + "' (available: si-ge)");
        timing.delta_g = 0.435;
        timing.h_ext_tesla = 2.0;
    }
    if (const std::string* text = option_value(invocation, "delta-g"))
        timing.delta_g = parse_double_option("delta-g", *text);
    if (const std::string* text = option_value(invocation, "field-tesla"))
        timing.h_ext_tesla = parse_double_option("field-tesla", *text);
    if (const std::string* text = option_value(invocation, "j-mev"))
        timing.j_ex_mev = parse_double_option("j-mev", *text);

    const EstimateReport requested = evaluate(timing);
    TimingModel si_ge;
    si_ge.delta_g = 0.435;
    si_ge.h_ext_tesla = 2.0;
    const EstimateReport reference = evaluate(si_ge);

    if (option_value(invocation, "json")) {
        out << "{\n  \"reference\": ";
        estimate_scenario_json(out, reference);
        out << ",\n  \"requested\": ";
        estimate_scenario_json(out, requested);
        out << "\n}\n";
        return kExitOk;
    }

    const auto line = [&](const std::string& label, const std::string& a, const std::string& b) {
        out << std::left << std::setw(22) << label << std::setw(18) << a << b << "\n";
    };
    line("quantity", "requested", "si-ge reference");
    line("delta_g", fmt(requested.timing.delta_g, 6), fmt(reference.timing.delta_g, 6));
    line("field (T)", fmt(requested.timing.h_ext_tesla, 6), fmt(reference.timing.h_ext_tesla, 6));
    line("J (meV)", fmt(requested.timing.j_ex_mev, 6), fmt(reference.timing.j_ex_mev, 6));
    line("t_z(pi) (ps)", fmt(requested.t_z_pi_ps, 6), fmt(reference.t_z_pi_ps, 6));
    line("t_x(pi) (ps)", fmt(requested.t_x_pi_ps, 6), fmt(reference.t_x_pi_ps, 6));
    line("nand duration (ps)", fmt(requested.clock.nand_duration_ps, 6),
         fmt(reference.clock.nand_duration_ps, 6));
    line("model clock (GHz)", fmt(requested.clock.clock_ghz, 6),
         fmt(reference.clock.clock_ghz, 6));
    line("reported clock (GHz)", fmt(requested.clock.reference_clock_ghz, 6),
         fmt(reference.clock.reference_clock_ghz, 6));
    line("discrepancy flagged", requested.clock.discrepancy_flagged ? "yes" : "no",
         reference.clock.discrepancy_flagged ? "yes" : "no");
    return kExitOk;
}

}  // namespace

int run_cli(const CliInvocation& invocation, std::ostream& out, std::ostream& err) {
    try {
        if (invocation.subcommand == "verify") return run_verify(invocation, out);
        if (invocation.subcommand == "simulate") return run_simulate(invocation, out);
        if (invocation.subcommand == "compile") return run_compile(invocation, out, err);
        if (invocation.subcommand == "estimate") return run_estimate(invocation, out);
        err << "error: unknown subcommand '" << invocation.subcommand
            << "' (expected verify, simulate, compile or estimate)\n";
        return kExitUsage;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitCheckFailed;  // non-convergent integration
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace spinpair
