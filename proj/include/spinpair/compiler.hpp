// Logical-circuit compilation: a line-oriented circuit language, lowering of
// logical gates to pulse schedules, physical timing, and a canonical JSON
// schedule interchange format.
//
// Unit boundary: the simulator works in natural units (hbar = mu_B = 1 with
// the field measured in tesla), so a coupling of 1 means one Bohr magneton
// times one tesla.  Everything physical lives here: schedule documents carry
// picoseconds, meV and GHz via the exact hbar/mu_B conversions, while the
// TimingModel quotes rotation times through its fixed round-number
// coefficients (35 ps and 0.5 ps for pi rotations at unit parameters).  The
// two scales intentionally differ; see README "Timing".
#pragma once

#include <string>
#include <vector>

#include "spinpair/dynamics.hpp"
#include "spinpair/spin_system.hpp"

namespace spinpair {

// ---------- logical circuits ----------

enum class GateKind { rx, ry, rz, nand_gate, cnot_gate, echo };

struct LogicalGate {
    GateKind kind = GateKind::rx;
    int qubit_a = 0;  // 0-based, as written in circuit text (q0, q1, ...)
    int qubit_b = 0;  // second operand of nand/cnot; cnot control is qubit_a
    double angle = 0.0;  // rotation angle, or idle time for echo
    int source_line = 0;  // 0 for gates built in code
};

struct LogicalCircuit {
    int n_logical = 0;
    std::vector<LogicalGate> gates;
};

// Grammar, one statement per line:
//   qubits N            header, required before any gate
//   rx q0 pi/2          single-qubit rotations: rx | ry | rz
//   nand q0 q1          two-qubit gates: nand | cnot (control first)
//   echo 10.0           refocusing block with the given total idle time
// '#' starts a comment; blank lines are skipped.  Angles are plain decimals
// or <k>pi[/<m>] with optional decimal k (default 1) and positive m.
// Throws std::invalid_argument naming the offending line.
LogicalCircuit parse_circuit(const std::string& text);

// ---------- physical timing ----------

// Device parameters used for picosecond estimates.  The coefficients are the
// quoted round numbers for pi rotations (Z: 35 ps at delta_g = 1 and 1 T;
// X: 0.5 ps at 1 meV) and are deliberately left as quoted rather than
// recomputed from hbar, so estimates match the published figures.
struct TimingModel {
    double delta_g = 1.0;
    double h_ext_tesla = 1.0;
    double j_ex_mev = 1.0;
    double coeff_z_ps = 35.0;
    double coeff_x_ps = 0.5;
};

// delta_g and field of qubit 1 plus the coupling of bond (1, 2).
TimingModel timing_from_device(const DeviceConfig& config);

// (theta / pi) * coeff_z / (|delta_g| * H).  Rejects delta_g = 0 (Z rotations
// become impossible) and H <= 0.
double duration_z(double theta, const TimingModel& timing);
// (theta / pi) * coeff_x / J.  Rejects J <= 0.
double duration_x(double theta, const TimingModel& timing);

struct ClockEstimate {
    double nand_duration_ps = 0.0;
    double clock_ghz = 0.0;
    double reference_clock_ghz = 6.0;  // the published figure, for comparison
    bool discrepancy_flagged = false;  // model clock off the reference by > 25%
};

// Duration of one encoded controlled-phase template,
// duration_z(pi) + duration_z(pi/2) + 2 * duration_x(pi/2), and the clock
// rate it implies.  The reference figure is reported alongside, never used
// to adjust the model.
ClockEstimate estimate_clock(const TimingModel& timing);

// ---------- lowering ----------

enum class RyPolicy {
    composite,  // rz(pi/2) . rx(theta) . rz(-pi/2), all timed segments
    resonant,   // one calibrated resonant pulse with carrier phase offset pi/2
};

struct LowerOptions {
    RyPolicy ry_policy = RyPolicy::composite;
    double resonant_ratio = 0.05;  // modulation depth / resonance frequency
};

struct CompileStats {
    int exchange_op_count = 0;
    int z_evolution_count = 0;
    int resonant_pulse_count = 0;
    double total_duration_ps = 0.0;
};

struct LoweredProgram {
    PulseSchedule schedule;
    CompileStats stats;
};

// Lowers a circuit onto a device.  Rules:
//   rx     one intra-pair exchange segment of area theta (field gated off:
//          the impulsive idealization of the fast/slow timing hierarchy)
//   rz     timed free Zeeman evolution; bystander qubits precess too and the
//          extra per-qubit Z phases are left to the verifier's local-Z fit
//   ry     per RyPolicy; a resonant pulse is followed by a free-evolution
//          segment completing the phase wound during the pulse window to a
//          full turn, so the block acts as the bare rotation and composes
//          with later gates on the same footing as the timed segments
//   nand   e(pi/2) on the end-to-end inter-qubit bond, free evolution of
//          logical phase pi, e(pi/2), free evolution of phase pi/2; requires
//          bond (2a, 2b-1) and both pairs sharing the ordered g pattern
//   cnot   ry(-pi/2) on the target, nand, ry(+pi/2)
//   echo   dynamics.qubit_echo with amplitude resonant_ratio * resonance
// Angles are folded into [0, 2pi) (gates are periodic up to global phase);
// whole gates folding to zero emit nothing.  total_duration_ps follows the
// TimingModel: exchange segments cost duration_x of their area, field-on
// segments cost duration_z of the phase wound by the gate's own qubit
// (qubit 1 for echo idles).  Throws std::invalid_argument on adjacency,
// splitting, or index violations, citing the source line when known.
LoweredProgram lower(const LogicalCircuit& circuit, const DeviceConfig& device,
                     const TimingModel& timing, const LowerOptions& options = {});

// ---------- schedule documents ----------

// Physical-unit image of a PulseSchedule: picoseconds, meV, GHz.
struct BondRecord {
    int i = 0;
    int j = 0;
    bool modulated = false;
    double j_mev = 0.0;       // constant bonds
    double amp_mev = 0.0;     // modulated bonds: amp * sin(2 pi f t + phase)
    double carrier_ghz = 0.0;
    double phase_rad = 0.0;
};

struct SegmentRecord {
    double duration_ps = 0.0;
    bool zeeman = true;
    std::vector<BondRecord> bonds;
};

struct ScheduleDocument {
    DeviceConfig device;
    std::vector<SegmentRecord> segments;
    CompileStats stats;
};

// Exact conversion constants between the simulator's natural units and the
// document's physical units.
double picoseconds_per_natural_time();  // hbar / (mu_B * 1 T), about 11.4 ps
double mev_per_natural_energy();        // mu_B * 1 T, about 0.058 meV

ScheduleDocument make_document(const PulseSchedule& schedule, const CompileStats& stats);
PulseSchedule to_pulse_schedule(const ScheduleDocument& document);

// Canonical JSON: sorted keys, two-space indent, doubles at 17 significant
// digits.  export . parse . export is byte-identical.
std::string export_schedule(const ScheduleDocument& document);
std::string export_schedule(const PulseSchedule& schedule, const CompileStats& stats);
// Throws std::invalid_argument with location context on malformed input.
ScheduleDocument parse_schedule(const std::string& text);

}  // namespace spinpair
