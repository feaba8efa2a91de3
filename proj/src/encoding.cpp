#include "spinpair/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace spinpair {

namespace {

constexpr double kStructureTol = 1e-12;

int popcount_label(Eigen::Index b, int n) {
    int ones = 0;
    for (int s = 0; s < n; ++s) ones += (b >> s) & 1;
    return ones;
}

}  // namespace

Eigen::Index label_to_index(const std::string& label) {
    if (label.empty() || label.size() > 12)
        throw std::invalid_argument("label length must be in 1..12");
    Eigen::Index index = 0;
    for (char c : label) {
        if (c != '0' && c != '1') throw std::invalid_argument("label must be binary: " + label);
        index = (index << 1) | (c == '1' ? 1 : 0);
    }
    return index;
}

std::string index_to_label(Eigen::Index index, int n_spins) {
    std::string label(n_spins, '0');
    for (int s = 0; s < n_spins; ++s)
        if ((index >> (n_spins - 1 - s)) & 1) label[s] = '1';
    return label;
}

// ---------- subspace bases ----------

namespace {

SubspaceBasis basis_from_indices(int n_spins, const std::vector<Eigen::Index>& indices) {
    SubspaceBasis basis;
    basis.n_spins = n_spins;
    basis.vectors = Matrix::Zero(Eigen::Index(1) << n_spins, indices.size());
    for (size_t k = 0; k < indices.size(); ++k) {
        basis.labels.push_back(index_to_label(indices[k], n_spins));
        basis.vectors(indices[k], k) = 1.0;
    }
    return basis;
}

}  // namespace

SubspaceBasis dfs_basis(int n_spins, double m) {
    if (n_spins < 1 || n_spins > 12)
        throw std::invalid_argument("dfs_basis: spin count must be in 1..12");
    const double ones_exact = n_spins / 2.0 - m;
    const int ones = static_cast<int>(std::lround(ones_exact));
    if (std::abs(ones_exact - ones) > 1e-9 || ones < 0 || ones > n_spins)
        throw std::invalid_argument("dfs_basis: m must satisfy n/2 - m integer in [0, n]");

    // Lexicographic label order coincides with numeric index order.
    std::vector<Eigen::Index> indices;
    for (Eigen::Index b = 0; b < (Eigen::Index(1) << n_spins); ++b)
        if (popcount_label(b, n_spins) == ones) indices.push_back(b);
    return basis_from_indices(n_spins, indices);
}

SubspaceBasis logical_qubit_basis(int site_i, int site_j, int n_spins) {
    if (n_spins < 2 || n_spins > 12)
        throw std::invalid_argument("logical_qubit_basis: spin count must be in 2..12");
    if (site_i < 1 || site_i > n_spins || site_j < 1 || site_j > n_spins || site_i == site_j)
        throw std::invalid_argument("logical_qubit_basis: bad pair");

    std::vector<int> rest;
    for (int s = 1; s <= n_spins; ++s)
        if (s != site_i && s != site_j) rest.push_back(s);

    std::vector<Eigen::Index> indices;
    for (int logical = 0; logical < 2; ++logical) {
        // |0>_Q = |01>: first spin of the pair up, second down.
        const int bit_i = logical, bit_j = 1 - logical;
        for (Eigen::Index x = 0; x < (Eigen::Index(1) << rest.size()); ++x) {
            Eigen::Index b = 0;
            b |= Eigen::Index(bit_i) << (n_spins - site_i);
            b |= Eigen::Index(bit_j) << (n_spins - site_j);
            for (size_t r = 0; r < rest.size(); ++r) {
                const Eigen::Index bit = (x >> (rest.size() - 1 - r)) & 1;
                b |= bit << (n_spins - rest[r]);
            }
            indices.push_back(b);
        }
    }
    return basis_from_indices(n_spins, indices);
}

SubspaceBasis logical_product_basis(const std::vector<std::pair<int, int>>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("logical_product_basis: no pairs");
    const int n_qubits = static_cast<int>(pairs.size());
    const int n_spins = 2 * n_qubits;
    if (n_spins > 12) throw std::invalid_argument("logical_product_basis: too many pairs");

    std::vector<int> covered;
    for (const auto& [i, j] : pairs) {
        if (i == j) throw std::invalid_argument("logical_product_basis: degenerate pair");
        covered.push_back(i);
        covered.push_back(j);
    }
    std::sort(covered.begin(), covered.end());
    for (int s = 1; s <= n_spins; ++s)
        if (covered[s - 1] != s)
            throw std::invalid_argument("logical_product_basis: pairs must tile spins 1..2k");

    std::vector<Eigen::Index> indices;
    for (Eigen::Index q = 0; q < (Eigen::Index(1) << n_qubits); ++q) {
        Eigen::Index b = 0;
        for (int k = 0; k < n_qubits; ++k) {
            const int logical = (q >> (n_qubits - 1 - k)) & 1;
            b |= Eigen::Index(logical) << (n_spins - pairs[k].first);
            b |= Eigen::Index(1 - logical) << (n_spins - pairs[k].second);
        }
        indices.push_back(b);
    }
    return basis_from_indices(n_spins, indices);
}

// ---------- leakage ----------

double leakage(const Matrix& u, const SubspaceBasis& basis) {
    if (u.rows() != basis.vectors.rows())
        throw std::invalid_argument("leakage: operator and basis dimensions differ");
    const Matrix mapped = u * basis.vectors;
    return operator_norm(mapped - basis.projector() * mapped);
}

LeakageWitness leakage_witness(int site_i, int site_j, const std::string& label) {
    const int n = static_cast<int>(label.size());
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("leakage_witness: label needs an even spin count");
    const Matrix h = heisenberg(n, site_i, site_j);
    const Vector state = Vector::Unit(Eigen::Index(1) << n, label_to_index(label));
    const Vector image = h * state;

    std::vector<std::pair<int, int>> pairs;
    for (int q = 1; q <= n / 2; ++q) pairs.emplace_back(2 * q - 1, 2 * q);
    const Vector outside = image - logical_product_basis(pairs).projector() * image;

    LeakageWitness witness;
    Eigen::Index at = 0;
    const double peak = outside.cwiseAbs().maxCoeff(&at);
    if (peak < kStructureTol) return witness;
    witness.out_label = index_to_label(at, n);
    witness.amplitude = image(at);
    return witness;
}

// ---------- logical operator decomposition ----------

LogicalOperatorSet logical_sigmas() {
    auto half = [](SpinAxis axis) { return spin_operator(1, 1, axis); };
    return {half(SpinAxis::X), half(SpinAxis::Y), half(SpinAxis::Z)};
}

SigmaDecomposition logical_operators_from_restriction(const Matrix& op, int site_i, int site_j,
                                                      int n_spins) {
    const Eigen::Index dim = Eigen::Index(1) << n_spins;
    if (op.rows() != dim || op.cols() != dim)
        throw std::invalid_argument("logical_operators_from_restriction: operator dimension "
                                    "does not match the spin count");
    if (site_i < 1 || site_i > n_spins || site_j < 1 || site_j > n_spins || site_i == site_j)
        throw std::invalid_argument("logical_operators_from_restriction: bad pair");

    // Reorder the register as (pair state, complement state).  In this order
    // an operator that acts only on the pair is K (x) I.
    std::vector<int> rest;
    for (int s = 1; s <= n_spins; ++s)
        if (s != site_i && s != site_j) rest.push_back(s);
    const Eigen::Index rest_dim = Eigen::Index(1) << rest.size();

    Matrix perm = Matrix::Zero(dim, dim);
    for (int a = 0; a < 4; ++a)
        for (Eigen::Index x = 0; x < rest_dim; ++x) {
            Eigen::Index b = 0;
            b |= Eigen::Index((a >> 1) & 1) << (n_spins - site_i);
            b |= Eigen::Index(a & 1) << (n_spins - site_j);
            for (size_t r = 0; r < rest.size(); ++r)
                b |= ((x >> (rest.size() - 1 - r)) & 1) << (n_spins - rest[r]);
            perm(b, a * rest_dim + x) = 1.0;
        }
    const Matrix reordered = perm.adjoint() * op * perm;

    Matrix pair_block(4, 4);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) pair_block(a, b) = reordered(a * rest_dim, b * rest_dim);
    if (max_abs(reordered - kron(pair_block, identity(rest_dim))) > kStructureTol)
        throw std::invalid_argument(
            "logical_operators_from_restriction: operator acts outside the pair");

    // Pair states are ordered {00, 01, 10, 11}; the logical span is {01, 10}.
    for (int outside : {0, 3})
        for (int logical : {1, 2})
            if (std::abs(pair_block(outside, logical)) > kStructureTol ||
                std::abs(pair_block(logical, outside)) > kStructureTol)
                throw std::invalid_argument(
                    "logical_operators_from_restriction: operator leaks from the logical span");

    const Matrix logical_block = pair_block.block(1, 1, 2, 2);
    const Complex trace_half = logical_block.trace() / 2.0;
    if (std::abs(trace_half.imag()) > kStructureTol)
        throw std::invalid_argument("logical_operators_from_restriction: non-Hermitian restriction");

    SigmaDecomposition result;
    result.identity_shift = trace_half.real();
    const Matrix traceless = logical_block - trace_half * identity(2);

    const LogicalOperatorSet sigmas = logical_sigmas();
    const Matrix sigma_ops[3] = {sigmas.x, sigmas.y, sigmas.z};
    const SpinAxis axis_ids[3] = {SpinAxis::X, SpinAxis::Y, SpinAxis::Z};
    int found = -1;
    double coeff = 0.0;
    for (int a = 0; a < 3; ++a) {
        // tr(Sigma^a Sigma^b) = delta_ab / 2, so the component is 2 tr(Sigma^a L).
        const Complex c = 2.0 * (sigma_ops[a] * traceless).trace();
        if (std::abs(c) <= kStructureTol) continue;
        if (std::abs(c.imag()) > kStructureTol || found >= 0)
            throw std::invalid_argument(
                "logical_operators_from_restriction: restriction mixes Pauli axes");
        found = a;
        coeff = c.real();
    }

    if (found < 0) {
        // Pure identity restriction: report a vanishing Z component.
        result.coefficient = 0.0;
        result.axis = SpinAxis::Z;
        result.logical = sigmas.z;
        if (max_abs(traceless) > kStructureTol)
            throw std::invalid_argument(
                "logical_operators_from_restriction: restriction mixes Pauli axes");
        return result;
    }
    if (max_abs(traceless - coeff * sigma_ops[found]) > kStructureTol)
        throw std::invalid_argument(
            "logical_operators_from_restriction: restriction mixes Pauli axes");
    result.coefficient = coeff;
    result.axis = axis_ids[found];
    result.logical = sigma_ops[found];
    return result;
}

// ---------- effective single-qubit field ----------

EffectiveField effective_qubit_field(double g1, double g2, double field_tesla, double j_intra) {
    DeviceConfig config;
    config.n_spins = 2;
    config.g_factors = {g1, g2};
    config.field_tesla = field_tesla;
    const Matrix h = zeeman(config) + j_intra * heisenberg(2, 1, 2);
    const Matrix block = restrict_to(h, logical_qubit_basis(1, 2, 2).vectors);

    const LogicalOperatorSet sigmas = logical_sigmas();
    EffectiveField field;
    field.h_x = (2.0 * (sigmas.x * block).trace()).real();
    field.h_z = (2.0 * (sigmas.z * block).trace()).real();
    const Complex shift = block.trace() / 2.0;
    if (max_abs(block - field.h_x * sigmas.x - field.h_z * sigmas.z - shift * identity(2)) >
        kStructureTol)
        throw std::invalid_argument("effective_qubit_field: unexpected off-plane component");
    return field;
}

}  // namespace spinpair
