// Spin-1/2 register operators and device description.
//
// Conventions used across the project:
//   - spins are numbered 1..n, spin 1 is the most significant tensor factor;
//   - the basis label "b1 b2 ... bn" maps to index sum_i b_i * 2^(n-i);
//   - bit 0 is the m = +1/2 state, so S^z = diag(+1/2, -1/2) on one spin;
//   - hbar = mu_B = 1: Zeeman energies are g*B with B the field in tesla,
//     exchange strengths are dimensionless couplings in the same energy unit
//     (physical-unit conversion happens in the compiler, nowhere else).
#pragma once

#include <string>
#include <vector>

#include "spinpair/linalg.hpp"

namespace spinpair {

enum class SpinAxis { X, Y, Z };

// ---------- operators ----------

// S_i^axis on an n-spin register (i is 1-based).  Throws std::out_of_range
// for i outside 1..n and std::invalid_argument for unsupported n.
Matrix spin_operator(int n_spins, int site, SpinAxis axis);

// Total S^z = sum_i S_i^z.
Matrix total_spin_z(int n_spins);

// Isotropic coupling S_i . S_j (unit strength).  Requires i != j.
Matrix heisenberg(int n_spins, int site_i, int site_j);

// exp(-i*theta*S_i.S_j): the exchange gate e_ij(theta).
Matrix exchange_gate(int n_spins, int site_i, int site_j, double theta);

// exp(-i*theta*S_i^axis): the single-spin rotation r_i^axis(theta).  theta is
// the rotation angle itself, independent of any field parameters.
Matrix rotation_gate(int n_spins, int site, SpinAxis axis, double theta);

// ---------- device description ----------

enum class Layout { longitudinal_1d, vertical_1d, horizontal_2d, vertical_2d, custom };

std::string layout_name(Layout layout);
Layout layout_from_name(const std::string& name);

struct Bond {
    int i = 0;  // 1-based spin indices, i < j after validation
    int j = 0;
    double j_max_mev = 1.0;  // maximum exchange strength, meV
};

// A register of spin pairs.  Qubit q (1-based) owns spins (2q-1, 2q).
struct DeviceConfig {
    int n_spins = 0;
    std::vector<double> g_factors;
    double field_tesla = 1.0;
    std::vector<Bond> bonds;
    Layout layout = Layout::custom;

    int n_qubits() const { return n_spins / 2; }
    // g(second spin) - g(first spin) of qubit q; the logical splitting is
    // delta_g * field.
    double delta_g(int qubit) const;
    // Bond joining spins (i, j) in either order; throws std::invalid_argument
    // if the device has none.
    const Bond& find_bond(int i, int j) const;
    bool has_bond(int i, int j) const;
};

// Full structural validation: sizes, index ranges, bond uniqueness, positive
// couplings, and (for named layouts) agreement of the bond set with the
// layout's adjacency pattern.  Throws std::invalid_argument on violation.
void validate_device(const DeviceConfig& config);

// Sum_i g_i * B * S_i^z.  Validates the config first.
Matrix zeeman(const DeviceConfig& config);

// ---------- layout factories ----------

// Named adjacency patterns for registers of spin pairs:
//   longitudinal_1d: pairs in a row laid end to end; inter-qubit bonds join
//                    the facing spins (2q, 2q+1).
//   vertical_1d:     pairs stacked perpendicular to the row; neighbours are
//                    joined top-top (2q-1, 2q+1) and bottom-bottom (2q, 2q+2).
//   horizontal_2d:   grid of horizontal pairs; rows chain end to end and
//                    vertical neighbours are joined spin-to-spin on both ends.
//   vertical_2d:     grid of vertical pairs; columns chain end to end and
//                    horizontal neighbours are joined top-top and
//                    bottom-bottom.
// grid_cols is required for the 2d layouts and must divide n_qubits.
DeviceConfig make_layout(Layout layout, int n_qubits, int grid_cols = 0,
                         double j_intra_mev = 1.0, double j_inter_mev = 1.0,
                         double g_first = 1.0, double g_second = 1.5,
                         double field_tesla = 1.0);

// ---------- config files ----------

// JSON object with keys n_spins, g_factors, field_tesla, bonds (array of
// [i, j, j_max_mev]), layout.  Throws std::invalid_argument on malformed
// input or failed validation.
DeviceConfig device_from_json_text(const std::string& text);
DeviceConfig load_device(const std::string& path);

}  // namespace spinpair
