// Dense complex linear algebra helpers shared by every module: Kronecker
// embedding, exact Hermitian exponentials, unitary comparison up to a global
// phase, and restriction of operators to subspaces.
//
// All matrices are dense and small (register dimension <= 2^8), so every
// routine works through full eigendecompositions or SVDs rather than
// approximations.
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace spinpair {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Tolerance for algebraic identities (stricter 1e-12 checks are used where
// values are exact by construction).
inline constexpr double kAlgebraTol = 1e-10;
inline constexpr double kExactTol = 1e-12;

// ---------- comparison ----------

// Result of comparing two equal-dimension unitaries modulo a global phase.
struct EquivalenceReport {
    double fidelity = 0.0;          // |tr(u^dag v)| / dim, in [0, 1]
    Complex global_phase = 1.0;     // phase p with v ~ p*u (unit modulus; 1 when fidelity = 0)
    double max_entry_deviation = 0.0;  // max_ij |v_ij - p*u_ij|
};

// fidelity = 1 (within tol) iff v = p*u for a unit scalar p.
// Throws std::invalid_argument on dimension mismatch.
EquivalenceReport compare_up_to_global_phase(const Matrix& u, const Matrix& v);

// ---------- construction ----------

// Kronecker product with `a` as the more significant tensor factor:
// out(i*rows(b)+k, j*cols(b)+l) = a(i,j) * b(k,l).
Matrix kron(const Matrix& a, const Matrix& b);

// exp(-i*theta*h) for Hermitian h, computed exactly via eigendecomposition.
// Throws std::invalid_argument if h is not square or deviates from
// Hermiticity by more than 1e-12 (max entry).
Matrix expm_hermitian(const Matrix& h, double theta);

// b_dag_op_b for a column-orthonormal basis matrix (dim x d, d <= dim).
// Throws std::invalid_argument if basis columns are not orthonormal within
// 1e-12 or the row count does not match op.
Matrix restrict_to(const Matrix& op, const Matrix& basis);

// ---------- small utilities ----------

// Largest singular value (operator 2-norm); 0 for empty matrices.
double operator_norm(const Matrix& m);

// max_ij |a_ij|; 0 for empty matrices.
double max_abs(const Matrix& m);

// ||u^dag u - I||_max, as a unitarity defect measure.
double unitarity_defect(const Matrix& u);

inline Matrix identity(Eigen::Index dim) { return Matrix::Identity(dim, dim); }

}  // namespace spinpair
