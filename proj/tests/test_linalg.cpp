#include "spinpair/linalg.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "test_util.hpp"

using namespace spinpair;
using testutil::random_hermitian;
using testutil::random_unitary;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("kron matches the index formula") {
    // Oracle: the defining entry formula, evaluated with explicit loops.
    std::mt19937_64 rng(101);
    Matrix a = testutil::random_gaussian(3, rng);
    Matrix b = testutil::random_gaussian(4, rng);
    Matrix k = kron(a, b);
    REQUIRE(k.rows() == 12);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c)
                    CHECK(std::abs(k(i * 4 + r, j * 4 + c) - a(i, j) * b(r, c)) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("kron is associative") {
    std::mt19937_64 rng(102);
    Matrix a = testutil::random_gaussian(2, rng);
    Matrix b = testutil::random_gaussian(3, rng);
    Matrix c = testutil::random_gaussian(2, rng);
    CHECK(max_abs(kron(kron(a, b), c) - kron(a, kron(b, c))) < 1e-12);
}

TEST_CASE("expm_hermitian of diag(1/2,-1/2) at 2pi is -identity") {
    // Oracle: scalar exponentials of the diagonal entries.
    Matrix h = Matrix::Zero(2, 2);
    h(0, 0) = 0.5;
    h(1, 1) = -0.5;
    Matrix u = expm_hermitian(h, 2.0 * kPi);
    CHECK(max_abs(u + identity(2)) < 1e-12);
}

TEST_CASE("expm_hermitian is additive in the angle") {
    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> angle(-2.0 * kPi, 2.0 * kPi);
    for (int trial = 0; trial < 50; ++trial) {
        Matrix h = random_hermitian(4, rng);
        double a = angle(rng), b = angle(rng);
        Matrix lhs = expm_hermitian(h, a) * expm_hermitian(h, b);
        Matrix rhs = expm_hermitian(h, a + b);
        CHECK(max_abs(lhs - rhs) < kAlgebraTol);
    }
}

TEST_CASE("expm_hermitian output is unitary and rejects non-Hermitian input") {
    std::mt19937_64 rng(104);
    Matrix h = random_hermitian(8, rng);
    CHECK(unitarity_defect(expm_hermitian(h, 0.7)) < 1e-12);

    Matrix bad = h;
    bad(0, 1) += Complex(0.0, 1e-6);
    CHECK_THROWS_AS(expm_hermitian(bad, 1.0), std::invalid_argument);
}

TEST_CASE("compare_up_to_global_phase recovers a pure phase") {
    std::mt19937_64 rng(105);
    Matrix u = random_unitary(5, rng);
    Complex phase = std::polar(1.0, 1.234);
    EquivalenceReport rep = compare_up_to_global_phase(u, phase * u);
    CHECK(rep.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(rep.global_phase - phase) < 1e-12);
    CHECK(rep.max_entry_deviation < 1e-12);
}

TEST_CASE("compare_up_to_global_phase of identity vs sigma-x is 0") {
    Matrix x = Matrix::Zero(2, 2);
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    CHECK(compare_up_to_global_phase(identity(2), x).fidelity == doctest::Approx(0.0));
}

TEST_CASE("compare_up_to_global_phase fidelity is symmetric") {
    std::mt19937_64 rng(106);
    for (int trial = 0; trial < 50; ++trial) {
        Matrix u = random_unitary(4, rng);
        Matrix v = random_unitary(4, rng);
        double f_uv = compare_up_to_global_phase(u, v).fidelity;
        double f_vu = compare_up_to_global_phase(v, u).fidelity;
        CHECK(f_uv == doctest::Approx(f_vu).epsilon(1e-12));
        CHECK(f_uv >= 0.0);
        CHECK(f_uv <= 1.0);
    }
}

TEST_CASE("compare_up_to_global_phase rejects dimension mismatch") {
    CHECK_THROWS_AS(compare_up_to_global_phase(identity(2), identity(3)), std::invalid_argument);
}

TEST_CASE("restrict_to keeps Hermiticity and validates the basis") {
    std::mt19937_64 rng(107);
    Matrix h = random_hermitian(8, rng);
    Matrix basis = random_unitary(8, rng).leftCols(3);
    Matrix r = restrict_to(h, basis);
    CHECK(r.rows() == 3);
    CHECK(max_abs(Matrix(r - r.adjoint())) < 1e-12);

    Matrix skewed = basis;
    skewed.col(0) *= 1.001;
    CHECK_THROWS_AS(restrict_to(h, skewed), std::invalid_argument);
}

TEST_CASE("restricting a bond-(1,2) pair coupling to the pair's m=0 sector times anything") {
    // Four spins; exchange coupling acts on the first pair only.  Restricted
    // to span{|01>, |10>}_pair x (full space of spins 3,4), the operator must
    // be (Sigma-x - I/4) (x) I_4.  Everything here is hand-built.
    Matrix coupling = kron(testutil::pair_heisenberg(), identity(4));
    Matrix basis = Matrix::Zero(16, 8);
    for (int x = 0; x < 4; ++x) {
        basis(4 + x, x) = 1.0;      // |01>_pair (x) |x>
        basis(8 + x, 4 + x) = 1.0;  // |10>_pair (x) |x>
    }
    Matrix expected = kron(testutil::sigma_half('x') - 0.25 * identity(2), identity(4));
    CHECK(max_abs(restrict_to(coupling, basis) - expected) < 1e-12);
}
