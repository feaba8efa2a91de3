#include "spinpair/compiler.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spinpair/encoding.hpp"
#include "spinpair/gates.hpp"

namespace spinpair {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
// CODATA: Bohr magneton in meV per tesla, hbar in meV times picoseconds.
constexpr double kMuBMevPerTesla = 5.7883818060e-2;
constexpr double kHbarMevPs = 6.582119569e-1;

[[noreturn]] void parse_fail(int line_no, const std::string& message) {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": " + message);
}

double parse_decimal(const std::string& token, int line_no) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end != begin + token.size() || token.empty())
        parse_fail(line_no, "malformed number '" + token + "'");
    if (!std::isfinite(value)) parse_fail(line_no, "number '" + token + "' is not finite");
    return value;
}

// Decimal, or <k>pi[/<m>] with decimal k (default 1, bare sign allowed) and
// positive m.
double parse_angle(const std::string& token, int line_no) {
    const auto pos = token.find("pi");
    if (pos == std::string::npos) return parse_decimal(token, line_no);
    const std::string head = token.substr(0, pos);
    const std::string tail = token.substr(pos + 2);
    double k = 1.0;
    if (head == "-")
        k = -1.0;
    else if (!head.empty() && head != "+")
        k = parse_decimal(head, line_no);
    double m = 1.0;
    if (!tail.empty()) {
        if (tail[0] != '/') parse_fail(line_no, "malformed angle '" + token + "'");
        m = parse_decimal(tail.substr(1), line_no);
        if (!(m > 0.0)) parse_fail(line_no, "angle divisor must be positive in '" + token + "'");
    }
    return k * kPi / m;
}

int parse_qubit(const std::string& token, int n_logical, int line_no) {
    if (token.size() < 2 || token[0] != 'q')
        parse_fail(line_no, "expected a qubit operand like q0, got '" + token + "'");
    int index = 0;
    for (std::size_t p = 1; p < token.size(); ++p) {
        if (!std::isdigit(static_cast<unsigned char>(token[p])))
            parse_fail(line_no, "expected a qubit operand like q0, got '" + token + "'");
        index = index * 10 + (token[p] - '0');
        if (index > 1'000'000) parse_fail(line_no, "qubit index out of range: '" + token + "'");
    }
    if (index >= n_logical)
        parse_fail(line_no, "qubit index out of range: '" + token + "' with " +
                                std::to_string(n_logical) + " declared");
    return index;
}

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream stream(line);
    std::string token;
    while (stream >> token) tokens.push_back(token);
    return tokens;
}

// Remainder of value modulo period folded into [0, period).  Tiny negative
// inputs whose remainder rounds up to the period itself fold to zero.
double fold_positive(double value, double period) {
    double r = std::fmod(value, period);
    if (r < 0.0) r += period;
    if (r >= period) r = 0.0;
    return r;
}

double splitting_of(const DeviceConfig& device, int qubit_1based) {
    const double g1 = device.g_factors[2 * qubit_1based - 2];
    const double g2 = device.g_factors[2 * qubit_1based - 1];
    return effective_qubit_field(g1, g2, device.field_tesla, 0.0).h_z;
}

// Turns logical gates into pulse segments and keeps the running cost model.
class Lowering {
  public:
    Lowering(const DeviceConfig& device, const TimingModel& timing, const LowerOptions& options,
             int n_logical)
        : device_(device), timing_(timing), options_(options), n_logical_(n_logical) {}

    void emit(const LogicalGate& gate) {
        switch (gate.kind) {
            case GateKind::rx:
                emit_rx(checked_qubit(gate.qubit_a), checked_angle(gate.angle));
                return;
            case GateKind::ry:
                emit_ry(checked_qubit(gate.qubit_a), checked_angle(gate.angle));
                return;
            case GateKind::rz:
                emit_rz(checked_qubit(gate.qubit_a), checked_angle(gate.angle));
                return;
            case GateKind::nand_gate:
            case GateKind::cnot_gate: {
                const int a = checked_qubit(gate.qubit_a);
                const int b = checked_qubit(gate.qubit_b);
                if (a == b) throw std::invalid_argument("two-qubit gate needs distinct qubits");
                if (gate.kind == GateKind::nand_gate)
                    emit_nand(a, b);
                else
                    emit_cnot(a, b);
                return;
            }
            case GateKind::echo:
                emit_echo(checked_angle(gate.angle));
                return;
        }
        throw std::invalid_argument("unknown gate kind");
    }

    std::vector<PulseSegment>&& segments() && { return std::move(segments_); }
    const CompileStats& stats() const { return stats_; }

  private:
    int checked_qubit(int qubit) const {
        if (qubit < 0 || qubit >= n_logical_)
            throw std::invalid_argument("qubit index out of range: q" + std::to_string(qubit));
        return qubit;
    }

    static double checked_angle(double value) {
        if (!std::isfinite(value)) throw std::invalid_argument("angle must be finite");
        return value;
    }

    // Nonzero logical splitting of a qubit, or a clear refusal.
    double required_splitting(int qubit0) const {
        const double c = splitting_of(device_, qubit0 + 1);
        if (std::abs(c) < 1e-12)
            throw std::invalid_argument(
                "q" + std::to_string(qubit0) +
                " has delta_g * B = 0; Z rotations are impossible on an unsplit pair");
        return c;
    }

    // One constant exchange segment of the given area, field gated off.
    void push_exchange(int site_i, int site_j, double angle) {
        if (!device_.has_bond(site_i, site_j))
            throw std::invalid_argument("device has no bond (" + std::to_string(site_i) + ", " +
                                        std::to_string(site_j) + ")");
        const double j_coupling = device_.find_bond(site_i, site_j).j_max_mev;
        const double area = fold_positive(angle, kTwoPi);
        if (area == 0.0) return;
        PulseSegment segment;
        segment.duration = area / j_coupling;
        segment.zeeman_active = false;
        BondDrive drive;
        drive.constant_j = j_coupling;
        segment.bond_couplings[{std::min(site_i, site_j), std::max(site_i, site_j)}] = drive;
        segments_.push_back(std::move(segment));
        stats_.exchange_op_count += 1;
        stats_.total_duration_ps += duration_x(area, timing_);
    }

    // Free Zeeman evolution for the given natural time; abs_coeff is the
    // winding rate of the qubit the gate addresses, used for the cost model.
    void push_free(double t_natural, double abs_coeff) {
        if (t_natural == 0.0) return;
        PulseSegment segment;
        segment.duration = t_natural;
        segment.zeeman_active = true;
        segments_.push_back(std::move(segment));
        stats_.z_evolution_count += 1;
        stats_.total_duration_ps += duration_z(abs_coeff * t_natural, timing_);
    }

    void emit_rx(int qubit0, double theta) {
        push_exchange(2 * qubit0 + 1, 2 * qubit0 + 2, theta);
    }

    void emit_rz(int qubit0, double theta) {
        const double c = required_splitting(qubit0);
        const double period = kTwoPi / std::abs(c);
        push_free(fold_positive(theta / c, period), std::abs(c));
    }

    void emit_ry(int qubit0, double theta) {
        const double folded = fold_positive(theta, kTwoPi);
        if (folded == 0.0) return;
        if (options_.ry_policy == RyPolicy::composite) {
            emit_rz(qubit0, -kPi / 2.0);
            emit_rx(qubit0, theta);
            emit_rz(qubit0, kPi / 2.0);
            return;
        }
        const double c = required_splitting(qubit0);
        const double target = folded > kPi ? folded - kTwoPi : folded;  // shortest pulse
        ResonantPulseSpec spec;
        spec.qubit = qubit0 + 1;
        spec.axis_angle = kPi / 2.0;
        spec.start_time = 0.0;
        const PulseSchedule pulse =
            synthesize_resonant_pulse(device_, target, options_.resonant_ratio * std::abs(c), spec);
        double window = 0.0;
        for (const PulseSegment& segment : pulse.segments) {
            stats_.total_duration_ps += duration_z(std::abs(c) * segment.duration, timing_);
            window += segment.duration;
            segments_.push_back(segment);
        }
        stats_.resonant_pulse_count += 1;
        // The qubit precesses during the pulse window.  A free-evolution
        // unwind completes that phase to a full turn, so the whole block acts
        // as the bare rotation and composes with later gates.
        push_free(fold_positive(-window, kTwoPi / std::abs(c)), std::abs(c));
    }

    void emit_nand(int qa0, int qb0) {
        const int lo = std::min(qa0, qb0) + 1;
        const int hi = std::max(qa0, qb0) + 1;
        const int left = 2 * lo;       // last spin of the lower pair
        const int right = 2 * hi - 1;  // first spin of the higher pair
        if (!device_.has_bond(left, right))
            throw std::invalid_argument(
                "q" + std::to_string(qa0) + " and q" + std::to_string(qb0) +
                " share no end-to-end bond (" + std::to_string(left) + ", " +
                std::to_string(right) + "); the qubits are not adjacent under this layout");
        const double* g = device_.g_factors.data();
        if (std::abs(g[2 * lo - 2] - g[2 * hi - 2]) > 1e-12 ||
            std::abs(g[2 * lo - 1] - g[2 * hi - 1]) > 1e-12)
            throw std::invalid_argument(
                "encoded controlled phase needs both pairs to carry the same ordered g factors");
        const CalibrationConvention& conv = calibration();
        const double eps = conv.delta_g_sign * device_.delta_g(lo) * device_.field_tesla;
        if (std::abs(eps) < 1e-12)
            throw std::invalid_argument("q" + std::to_string(qa0) +
                                        " has delta_g * B = 0; the controlled phase needs a "
                                        "nonzero splitting");
        const double period = kTwoPi / std::abs(eps);
        const double xangle = conv.exchange_sign * kPi / 2.0;
        const auto free_time = [&](double phi) {
            return fold_positive(conv.u0_angle_scale * phi / eps, period);
        };
        push_exchange(left, right, xangle);
        push_free(free_time(kPi), std::abs(eps));
        push_exchange(left, right, xangle);
        push_free(free_time(kPi / 2.0), std::abs(eps));
    }

    void emit_cnot(int control0, int target0) {
        emit_ry(target0, -kPi / 2.0);
        emit_nand(control0, target0);
        emit_ry(target0, kPi / 2.0);
    }

    void emit_echo(double idle_time) {
        double min_resonance = std::numeric_limits<double>::infinity();
        for (int q = 0; q < device_.n_qubits(); ++q)
            min_resonance = std::min(min_resonance, std::abs(required_splitting(q)));
        const double clock = std::abs(required_splitting(0));  // cost-model reference
        const PulseSchedule echo =
            qubit_echo(device_, idle_time, options_.resonant_ratio * min_resonance);
        for (const PulseSegment& segment : echo.segments) {
            if (segment.bond_couplings.empty())
                stats_.z_evolution_count += 1;
            else
                stats_.resonant_pulse_count += static_cast<int>(segment.bond_couplings.size());
            stats_.total_duration_ps += duration_z(clock * segment.duration, timing_);
            segments_.push_back(segment);
        }
    }

    const DeviceConfig& device_;
    const TimingModel& timing_;
    const LowerOptions& options_;
    int n_logical_;
    std::vector<PulseSegment> segments_;
    CompileStats stats_;
};

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

void require(bool condition, const std::string& message) {
    if (!condition) throw std::invalid_argument("schedule: " + message);
}

}  // namespace

// ---------- circuit parsing ----------

LogicalCircuit parse_circuit(const std::string& text) {
    LogicalCircuit circuit;
    bool have_header = false;
    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::vector<std::string> tokens = split_tokens(raw);
        if (tokens.empty()) continue;
        const std::string& mnemonic = tokens[0];
        if (mnemonic == "qubits") {
            if (have_header) parse_fail(line_no, "duplicate 'qubits' header");
            if (tokens.size() != 2) parse_fail(line_no, "usage: qubits N");
            const double n = parse_decimal(tokens[1], line_no);
            if (n < 1 || n != std::floor(n) || n > 64)
                parse_fail(line_no, "qubit count must be an integer in 1..64");
            circuit.n_logical = static_cast<int>(n);
            have_header = true;
            continue;
        }
        if (!have_header) parse_fail(line_no, "expected 'qubits N' header before any gate");
        LogicalGate gate;
        gate.source_line = line_no;
        if (mnemonic == "rx" || mnemonic == "ry" || mnemonic == "rz") {
            if (tokens.size() != 3)
                parse_fail(line_no, "usage: " + mnemonic + " q<i> <angle>");
            gate.kind = mnemonic == "rx"   ? GateKind::rx
                        : mnemonic == "ry" ? GateKind::ry
                                           : GateKind::rz;
            gate.qubit_a = parse_qubit(tokens[1], circuit.n_logical, line_no);
            gate.angle = parse_angle(tokens[2], line_no);
        } else if (mnemonic == "nand" || mnemonic == "cnot") {
            if (tokens.size() != 3)
                parse_fail(line_no, "usage: " + mnemonic + " q<i> q<j>");
            gate.kind = mnemonic == "nand" ? GateKind::nand_gate : GateKind::cnot_gate;
            gate.qubit_a = parse_qubit(tokens[1], circuit.n_logical, line_no);
            gate.qubit_b = parse_qubit(tokens[2], circuit.n_logical, line_no);
            if (gate.qubit_a == gate.qubit_b)
                parse_fail(line_no, "'" + mnemonic + "' needs two distinct qubits");
        } else if (mnemonic == "echo") {
            if (tokens.size() != 2) parse_fail(line_no, "usage: echo <idle_time>");
            gate.kind = GateKind::echo;
            gate.angle = parse_angle(tokens[1], line_no);
            if (gate.angle < 0.0) parse_fail(line_no, "echo idle time must be nonnegative");
        } else {
            parse_fail(line_no, "unknown mnemonic '" + mnemonic + "'");
        }
        circuit.gates.push_back(gate);
    }
    if (!have_header) throw std::invalid_argument("missing 'qubits N' header");
    return circuit;
}

// ---------- physical timing ----------

TimingModel timing_from_device(const DeviceConfig& config) {
    validate_device(config);
    TimingModel timing;
    timing.delta_g = std::abs(config.delta_g(1));
    timing.h_ext_tesla = config.field_tesla;
    if (!config.has_bond(1, 2))
        throw std::invalid_argument("timing_from_device: device has no intra-pair bond (1, 2)");
    timing.j_ex_mev = config.find_bond(1, 2).j_max_mev;
    return timing;
}

double duration_z(double theta, const TimingModel& timing) {
    if (!std::isfinite(theta)) throw std::invalid_argument("duration_z: angle must be finite");
    if (timing.delta_g == 0.0)
        throw std::invalid_argument(
            "duration_z: delta_g = 0 makes Z rotations impossible (unsplit pair)");
    if (!(timing.h_ext_tesla > 0.0))
        throw std::invalid_argument("duration_z: field must be positive");
    return theta / kPi * timing.coeff_z_ps / (std::abs(timing.delta_g) * timing.h_ext_tesla);
}

double duration_x(double theta, const TimingModel& timing) {
    if (!std::isfinite(theta)) throw std::invalid_argument("duration_x: angle must be finite");
    if (!(timing.j_ex_mev > 0.0))
        throw std::invalid_argument("duration_x: exchange coupling must be positive");
    return theta / kPi * timing.coeff_x_ps / timing.j_ex_mev;
}

ClockEstimate estimate_clock(const TimingModel& timing) {
    ClockEstimate estimate;
    estimate.nand_duration_ps = duration_z(kPi, timing) + duration_z(kPi / 2.0, timing) +
                                2.0 * duration_x(kPi / 2.0, timing);
    estimate.clock_ghz = 1000.0 / estimate.nand_duration_ps;
    estimate.discrepancy_flagged =
        std::abs(estimate.clock_ghz - estimate.reference_clock_ghz) >
        0.25 * estimate.reference_clock_ghz;
    return estimate;
}

// ---------- lowering ----------

LoweredProgram lower(const LogicalCircuit& circuit, const DeviceConfig& device,
                     const TimingModel& timing, const LowerOptions& options) {
    validate_device(device);
    if (circuit.n_logical < 1)
        throw std::invalid_argument("circuit declares no logical qubits");
    if (circuit.n_logical > device.n_qubits())
        throw std::invalid_argument("circuit needs " + std::to_string(circuit.n_logical) +
                                    " qubits but the device has " +
                                    std::to_string(device.n_qubits()));
    Lowering lowering(device, timing, options, circuit.n_logical);
    for (const LogicalGate& gate : circuit.gates) {
        try {
            lowering.emit(gate);
        } catch (const std::invalid_argument& error) {
            if (gate.source_line > 0)
                throw std::invalid_argument("line " + std::to_string(gate.source_line) + ": " +
                                            error.what());
            throw;
        }
    }
    LoweredProgram program;
    program.stats = lowering.stats();
    program.schedule.device = device;
    program.schedule.segments = std::move(lowering).segments();
    return program;
}

// ---------- schedule documents ----------

double picoseconds_per_natural_time() { return kHbarMevPs / kMuBMevPerTesla; }
double mev_per_natural_energy() { return kMuBMevPerTesla; }

ScheduleDocument make_document(const PulseSchedule& schedule, const CompileStats& stats) {
    const double ps = picoseconds_per_natural_time();
    const double mev = mev_per_natural_energy();
    ScheduleDocument document;
    document.device = schedule.device;
    document.stats = stats;
    for (const PulseSegment& segment : schedule.segments) {
        SegmentRecord record;
        record.duration_ps = segment.duration * ps;
        record.zeeman = segment.zeeman_active;
        for (const auto& [sites, drive] : segment.bond_couplings) {
            BondRecord bond;
            bond.i = sites.first;
            bond.j = sites.second;
            bond.modulated = drive.modulated;
            if (drive.modulated) {
                bond.amp_mev = drive.amplitude * mev;
                bond.carrier_ghz = drive.carrier / ps / kTwoPi * 1000.0;
                bond.phase_rad = drive.phase;
            } else {
                bond.j_mev = drive.constant_j * mev;
            }
            record.bonds.push_back(bond);
        }
        document.segments.push_back(std::move(record));
    }
    return document;
}

PulseSchedule to_pulse_schedule(const ScheduleDocument& document) {
    const double ps = picoseconds_per_natural_time();
    const double mev = mev_per_natural_energy();
    PulseSchedule schedule;
    schedule.device = document.device;
    for (const SegmentRecord& record : document.segments) {
        PulseSegment segment;
        segment.duration = record.duration_ps / ps;
        segment.zeeman_active = record.zeeman;
        for (const BondRecord& bond : record.bonds) {
            BondDrive drive;
            drive.modulated = bond.modulated;
            if (bond.modulated) {
                drive.amplitude = bond.amp_mev / mev;
                drive.carrier = bond.carrier_ghz * kTwoPi * ps / 1000.0;
                drive.phase = bond.phase_rad;
            } else {
                drive.constant_j = bond.j_mev / mev;
            }
            segment.bond_couplings[{bond.i, bond.j}] = drive;
        }
        schedule.segments.push_back(std::move(segment));
    }
    return schedule;
}

std::string export_schedule(const ScheduleDocument& document) {
    std::string out;
    out += "{\n";
    out += "  \"device\": {\n";
    out += "    \"bonds\": [";
    for (std::size_t b = 0; b < document.device.bonds.size(); ++b) {
        const Bond& bond = document.device.bonds[b];
        out += b == 0 ? "\n" : ",\n";
        out += "      [" + std::to_string(bond.i) + ", " + std::to_string(bond.j) + ", " +
               format_double(bond.j_max_mev) + "]";
    }
    out += document.device.bonds.empty() ? "],\n" : "\n    ],\n";
    out += "    \"field_tesla\": " + format_double(document.device.field_tesla) + ",\n";
    out += "    \"g_factors\": [";
    for (std::size_t g = 0; g < document.device.g_factors.size(); ++g) {
        if (g > 0) out += ", ";
        out += format_double(document.device.g_factors[g]);
    }
    out += "],\n";
    out += "    \"layout\": \"" + layout_name(document.device.layout) + "\",\n";
    out += "    \"n_spins\": " + std::to_string(document.device.n_spins) + "\n";
    out += "  },\n";
    out += "  \"segments\": [";
    for (std::size_t s = 0; s < document.segments.size(); ++s) {
        const SegmentRecord& segment = document.segments[s];
        out += s == 0 ? "\n" : ",\n";
        out += "    {\n";
        out += "      \"bonds\": [";
        for (std::size_t b = 0; b < segment.bonds.size(); ++b) {
            const BondRecord& bond = segment.bonds[b];
            out += b == 0 ? "\n" : ",\n";
            out += "        {\n";
            if (bond.modulated) {
                out += "          \"amp_mev\": " + format_double(bond.amp_mev) + ",\n";
                out += "          \"carrier_ghz\": " + format_double(bond.carrier_ghz) + ",\n";
                out += "          \"i\": " + std::to_string(bond.i) + ",\n";
                out += "          \"j\": " + std::to_string(bond.j) + ",\n";
                out += "          \"mode\": \"sin\",\n";
                out += "          \"phase_rad\": " + format_double(bond.phase_rad) + "\n";
            } else {
                out += "          \"i\": " + std::to_string(bond.i) + ",\n";
                out += "          \"j\": " + std::to_string(bond.j) + ",\n";
                out += "          \"j_mev\": " + format_double(bond.j_mev) + ",\n";
                out += "          \"mode\": \"constant\"\n";
            }
            out += "        }";
        }
        out += segment.bonds.empty() ? "],\n" : "\n      ],\n";
        out += "      \"duration_ps\": " + format_double(segment.duration_ps) + ",\n";
        out += std::string("      \"zeeman\": ") + (segment.zeeman ? "true" : "false") + "\n";
        out += "    }";
    }
    out += document.segments.empty() ? "],\n" : "\n  ],\n";
    out += "  \"stats\": {\n";
    out += "    \"exchange_op_count\": " + std::to_string(document.stats.exchange_op_count) +
           ",\n";
    out += "    \"resonant_pulse_count\": " +
           std::to_string(document.stats.resonant_pulse_count) + ",\n";
    out += "    \"total_duration_ps\": " + format_double(document.stats.total_duration_ps) +
           ",\n";
    out += "    \"z_evolution_count\": " + std::to_string(document.stats.z_evolution_count) +
           "\n";
    out += "  }\n";
    out += "}\n";
    return out;
}

std::string export_schedule(const PulseSchedule& schedule, const CompileStats& stats) {
    return export_schedule(make_document(schedule, stats));
}

ScheduleDocument parse_schedule(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("schedule: ") + e.what());
    }
    ScheduleDocument document;
    require(doc.is_object(), "top level must be an object");
    require(doc.contains("device") && doc.contains("segments") && doc.contains("stats"),
            "missing one of the keys device/segments/stats");
    document.device = device_from_json_text(doc.at("device").dump());
    require(doc.at("segments").is_array(), "'segments' must be an array");
    int s = 0;
    for (const auto& seg : doc.at("segments")) {
        const std::string where = "segments[" + std::to_string(s) + "]";
        require(seg.is_object(), where + " must be an object");
        SegmentRecord record;
        try {
            record.duration_ps = seg.at("duration_ps").get<double>();
            record.zeeman = seg.at("zeeman").get<bool>();
        } catch (const nlohmann::json::exception& e) {
            throw std::invalid_argument("schedule: " + where + ": " + e.what());
        }
        require(std::isfinite(record.duration_ps) && record.duration_ps > 0.0,
                where + ": duration_ps must be positive and finite");
        require(seg.contains("bonds") && seg.at("bonds").is_array(),
                where + ": 'bonds' must be an array");
        int b = 0;
        for (const auto& entry : seg.at("bonds")) {
            const std::string at = where + ".bonds[" + std::to_string(b) + "]";
            BondRecord bond;
            try {
                bond.i = entry.at("i").get<int>();
                bond.j = entry.at("j").get<int>();
                const std::string mode = entry.at("mode").get<std::string>();
                if (mode == "constant") {
                    bond.modulated = false;
                    bond.j_mev = entry.at("j_mev").get<double>();
                } else if (mode == "sin") {
                    bond.modulated = true;
                    bond.amp_mev = entry.at("amp_mev").get<double>();
                    bond.carrier_ghz = entry.at("carrier_ghz").get<double>();
                    bond.phase_rad = entry.at("phase_rad").get<double>();
                } else {
                    throw std::invalid_argument("schedule: " + at + ": unknown mode '" + mode +
                                                "'");
                }
            } catch (const nlohmann::json::exception& e) {
                throw std::invalid_argument("schedule: " + at + ": " + e.what());
            }
            record.bonds.push_back(bond);
            ++b;
        }
        document.segments.push_back(std::move(record));
        ++s;
    }
    const auto& stats = doc.at("stats");
    try {
        document.stats.exchange_op_count = stats.at("exchange_op_count").get<int>();
        document.stats.z_evolution_count = stats.at("z_evolution_count").get<int>();
        document.stats.resonant_pulse_count = stats.at("resonant_pulse_count").get<int>();
        document.stats.total_duration_ps = stats.at("total_duration_ps").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("schedule: stats: ") + e.what());
    }
    require(document.stats.exchange_op_count >= 0 && document.stats.z_evolution_count >= 0 &&
                document.stats.resonant_pulse_count >= 0,
            "stats counts must be nonnegative");
    require(std::isfinite(document.stats.total_duration_ps) &&
                document.stats.total_duration_ps >= 0.0,
            "stats total_duration_ps must be nonnegative and finite");
    return document;
}

}  // namespace spinpair
