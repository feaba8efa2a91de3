#include "spinpair/linalg.hpp"

#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

namespace spinpair {

double max_abs(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().maxCoeff();
}

double operator_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

double unitarity_defect(const Matrix& u) {
    return max_abs(Matrix(u.adjoint() * u) - identity(u.cols()));
}

EquivalenceReport compare_up_to_global_phase(const Matrix& u, const Matrix& v) {
    if (u.rows() != v.rows() || u.cols() != v.cols() || u.rows() != u.cols())
        throw std::invalid_argument("compare_up_to_global_phase: dimension mismatch");

    EquivalenceReport report;
    const Complex overlap = (u.adjoint() * v).trace();
    report.fidelity = std::abs(overlap) / static_cast<double>(u.rows());
    // Guard against 1 + epsilon from rounding; the fidelity is a true ratio.
    if (report.fidelity > 1.0 && report.fidelity < 1.0 + 1e-9) report.fidelity = 1.0;
    report.global_phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
    report.max_entry_deviation = max_abs(v - report.global_phase * u);
    return report;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

Matrix expm_hermitian(const Matrix& h, double theta) {
    if (h.rows() != h.cols())
        throw std::invalid_argument("expm_hermitian: matrix not square");
    if (max_abs(Matrix(h - h.adjoint())) > kExactTol)
        throw std::invalid_argument("expm_hermitian: matrix not Hermitian within 1e-12");

    Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    Vector phases(lambda.size());
    for (Eigen::Index k = 0; k < lambda.size(); ++k)
        phases(k) = std::exp(Complex(0.0, -theta * lambda(k)));
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

Matrix restrict_to(const Matrix& op, const Matrix& basis) {
    if (op.rows() != op.cols())
        throw std::invalid_argument("restrict_to: operator not square");
    if (basis.rows() != op.rows())
        throw std::invalid_argument("restrict_to: basis row count does not match operator");
    if (basis.cols() > basis.rows())
        throw std::invalid_argument("restrict_to: more basis vectors than space dimension");
    if (max_abs(Matrix(basis.adjoint() * basis) - identity(basis.cols())) > kExactTol)
        throw std::invalid_argument("restrict_to: basis columns not orthonormal within 1e-12");
    return basis.adjoint() * op * basis;
}

}  // namespace spinpair
