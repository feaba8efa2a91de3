// Exchange-plus-Zeeman gate constructions on encoded qubits.
//
// Two constructions are provided and verified: a two-spin controlled-phase
// unit built from two half-angle exchange pulses and three single-spin Z
// rotations, and its encoded counterpart on two spin-pair qubits built from
// two inter-pair exchange pulses interleaved with free Zeeman evolution.
// All sign conventions are pinned once by a small calibration scan and then
// reused everywhere (see calibration()).
#pragma once

#include <array>

#include "spinpair/encoding.hpp"
#include "spinpair/linalg.hpp"
#include "spinpair/spin_system.hpp"

namespace spinpair {

// ---------- targets ----------

// diag(1, 1, 1, -1): phase (-1)^(a AND b) on |ab>.
Matrix controlled_phase_target();
// Controlled NOT with the first qubit as control.
Matrix cnot_target();

// ---------- calibration ----------

// Sign and scale conventions that make the encoded construction reproduce
// the controlled-phase target.  Determined once by scanning the eight
// combinations below on a reference two-qubit device and frozen for the
// lifetime of the process; every builder reads them through calibration().
struct CalibrationConvention {
    double exchange_sign = 1.0;   // theta -> exchange_sign * theta inside exchange pulses
    double delta_g_sign = 1.0;    // sign convention of the logical splitting delta_g * B
    double u0_angle_scale = 1.0;  // free-evolution time = scale * phi / (delta_g * B)
    double scan_fidelity = 0.0;   // encoded-construction fidelity achieved by this choice
};

const CalibrationConvention& calibration();

// ---------- gate sequences ----------

struct GateStep {
    enum class Kind { exchange, rotation, free_evolution };
    Kind kind;
    int site_a = 0;  // spins touched (site_b = 0 for single-spin steps)
    int site_b = 0;
    SpinAxis axis = SpinAxis::Z;  // rotations only
    double angle = 0.0;           // exchange/rotation angle, or logical phase for free evolution
};

struct GateSequence {
    std::vector<GateStep> steps;  // in application order (first entry acts first)
    int total_exchange_ops() const;
    int total_free_evolutions() const;
};

// ---------- physical-pair construction ----------

// Two-spin controlled phase: r_2^z(-pi/2) r_1^z(pi/2) e_12(pi/2) r_1^z(pi)
// e_12(pi/2), rightmost factor applied first.  Returns the 4x4 unitary.
Matrix build_nand_physical();
GateSequence nand_physical_sequence();

// r_2^y(pi/2) * build_nand_physical() * r_2^y(-pi/2): controlled NOT with
// the first qubit as control, exact up to a global phase.
Matrix build_cnot_from_nand();

// ---------- encoded construction ----------

// Free Zeeman evolution of the whole register timed so that each logical
// qubit accumulates Z angle phi (referenced to the first pair's splitting;
// the device must give every pair the same splitting for the encoded
// constructions).  Throws std::invalid_argument when the splitting vanishes
// and phi != 0.
Matrix build_u0(const DeviceConfig& config, double phi);

// Encoded controlled phase on a four-spin device with pairs (1,2), (3,4) and
// the inter-pair bond (2,3): u0(pi/2) e_23(pi/2) u0(pi) e_23(pi/2).
Matrix build_nand_encoded(const DeviceConfig& config);
GateSequence nand_encoded_sequence();

// ---------- verification ----------

struct LocalZFit {
    std::array<double, 2> phases{};  // per-qubit Z correction angles, in (-pi, pi]
    double fidelity = 0.0;           // after correction and global phase
};

// Best per-qubit Z corrections: maximises |tr((C(phases)*target)^dag v)|/dim
// over diagonal corrections C = Z(phi_1) (x) Z(phi_2) (or a single Z for
// n_qubits = 1).  v and target must be 2^n x 2^n with n_qubits in {1, 2}.
LocalZFit fit_local_z_phases(const Matrix& v, const Matrix& target, int n_qubits);

struct ControlledPhaseReport {
    bool is_block_diagonal = false;        // leakage_norm <= 1e-10
    double leakage_norm = 0.0;
    std::array<Complex, 4> diagonal_phases{};  // unit phases of the restricted diagonal
                                               // (zero where the entry vanishes)
    double fidelity_vs_nand = 0.0;         // global phase freedom only
    Complex global_phase = 1.0;
    double fidelity_zcorrected = 0.0;      // after best per-qubit Z corrections
    std::array<double, 2> residual_local_z{};  // the fitted correction angles
};

// Restricts u to a four-dimensional two-qubit logical basis and compares
// against the controlled-phase target.
ControlledPhaseReport verify_controlled_phase(const Matrix& u, const SubspaceBasis& basis);

}  // namespace spinpair
