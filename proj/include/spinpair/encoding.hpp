// Decoherence-free encodings: fixed total-S^z subspaces of spin registers,
// the two-spin logical qubit spanned by {|01>, |10>}, leakage measures, and
// the decomposition of pair operators into logical Pauli components.
//
// Logical conventions: |0>_Q = |01>, |1>_Q = |10>; multi-qubit ordering puts
// qubit 1 in the most significant slot; logical operators are the half-Pauli
// set Sigma^a = sigma^a / 2.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "spinpair/linalg.hpp"
#include "spinpair/spin_system.hpp"

namespace spinpair {

// ---------- label helpers ----------

// "0110" -> index under the spin-1-most-significant ordering.
Eigen::Index label_to_index(const std::string& label);
std::string index_to_label(Eigen::Index index, int n_spins);

// ---------- subspace bases ----------

// Ordered orthonormal basis of a subspace of an n-spin register.  Columns of
// `vectors` are the basis states; `labels` names them (computational bit
// strings for every basis produced here).
struct SubspaceBasis {
    int n_spins = 0;
    std::vector<std::string> labels;
    Matrix vectors;  // 2^n x dim, column-orthonormal

    Eigen::Index dim() const { return vectors.cols(); }
    Matrix projector() const { return vectors * vectors.adjoint(); }
};

// All n-spin computational states with total S^z = m, in lexicographic label
// order.  dim = C(n, n/2 - m).  Throws std::invalid_argument unless
// n/2 - m is an integer in [0, n].
SubspaceBasis dfs_basis(int n_spins, double m);

// The logical qubit carried by spins (i, j) of an n-spin register: the span
// of {|01>_ij, |10>_ij} tensored with the full space of the remaining spins.
// Ordering is logical-major (all |01> states first, complement lexicographic
// within), so restrictions of pair-local operators factor as L (x) I.
SubspaceBasis logical_qubit_basis(int site_i, int site_j, int n_spins);

// Product of per-pair logical qubits.  The pairs must tile spins 1..2k; the
// basis is ordered with qubit 1 most significant: for pairs (1,2),(3,4) the
// labels are [0101, 0110, 1001, 1010] = |00>_Q..|11>_Q.
SubspaceBasis logical_product_basis(const std::vector<std::pair<int, int>>& pairs);

// ---------- leakage ----------

// Operator 2-norm of (I - P) u P: how strongly u couples the subspace to its
// complement.  0 <= leakage <= 1 for unitary u; 0 iff u preserves the span.
double leakage(const Matrix& u, const SubspaceBasis& basis);

struct LeakageWitness {
    std::string out_label;  // empty when the state does not leak
    Complex amplitude = 0.0;
};

// Applies the coupling S_i.S_j to the computational state `label` and returns
// the dominant component outside the logical product space of the canonical
// pairing (1,2),(3,4),...  The amplitude is the full matrix element
// <out|S_i.S_j|label>.
LeakageWitness leakage_witness(int site_i, int site_j, const std::string& label);

// ---------- logical operator decomposition ----------

struct LogicalOperatorSet {
    Matrix x, y, z;  // half-Pauli 2x2 blocks on {|0>_Q, |1>_Q}
};
LogicalOperatorSet logical_sigmas();

struct SigmaDecomposition {
    double coefficient = 0.0;   // restriction = coefficient * Sigma^axis + shift * I
    SpinAxis axis = SpinAxis::Z;
    double identity_shift = 0.0;
    Matrix logical;             // the 2x2 Sigma^axis block itself
};

// Restricts an n-spin operator to the logical qubit of pair (i, j) and
// decomposes the result as coefficient * Sigma^A + shift * I.  Requirements,
// each enforced within 1e-12: the operator acts trivially on spins outside
// the pair, preserves the pair's logical span, and lies on a single Pauli
// axis.  Restrictions proportional to the identity report coefficient 0 on
// the Z axis.
SigmaDecomposition logical_operators_from_restriction(const Matrix& op, int site_i, int site_j,
                                                      int n_spins);

// ---------- effective single-qubit field ----------

struct EffectiveField {
    double h_x = 0.0;  // Sigma^x component: intra-pair exchange strength
    double h_z = 0.0;  // Sigma^z component: (g1 - g2) * B under our label order
};

// Logical field of one pair under Zeeman splitting plus a static intra-pair
// exchange j_intra, read off the restriction of the combined Hamiltonian.
EffectiveField effective_qubit_field(double g1, double g2, double field_tesla, double j_intra);

}  // namespace spinpair
