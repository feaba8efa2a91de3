#include "spinpair/spin_system.hpp"

#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "test_util.hpp"

using namespace spinpair;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Permutation matrix exchanging the states of spins i and j (1-based) on an
// n-spin register, built directly from bit manipulation.
Matrix swap_permutation(int n, int i, int j) {
    const Eigen::Index dim = Eigen::Index(1) << n;
    Matrix p = Matrix::Zero(dim, dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        const int bi = (b >> (n - i)) & 1;
        const int bj = (b >> (n - j)) & 1;
        Eigen::Index target = b;
        target &= ~((Eigen::Index(1) << (n - i)) | (Eigen::Index(1) << (n - j)));
        target |= Eigen::Index(bj) << (n - i);
        target |= Eigen::Index(bi) << (n - j);
        p(target, b) = 1.0;
    }
    return p;
}

DeviceConfig demo_device() {
    return make_layout(Layout::longitudinal_1d, 2);
}

}  // namespace

TEST_CASE("spin operators satisfy the su(2) commutation relations") {
    std::mt19937_64 rng(201);
    std::uniform_int_distribution<int> pick_n(1, 4);
    const SpinAxis axes[3] = {SpinAxis::X, SpinAxis::Y, SpinAxis::Z};
    for (int trial = 0; trial < 50; ++trial) {
        const int n = pick_n(rng);
        const int site = std::uniform_int_distribution<int>(1, n)(rng);
        Matrix s[3];
        for (int a = 0; a < 3; ++a) s[a] = spin_operator(n, site, axes[a]);
        for (int a = 0; a < 3; ++a) {
            const int b = (a + 1) % 3, c = (a + 2) % 3;
            Matrix commutator = s[a] * s[b] - s[b] * s[a];
            CHECK(max_abs(commutator - Complex(0.0, 1.0) * s[c]) < 1e-12);
        }
    }
}

TEST_CASE("spin operators on different sites commute") {
    Matrix x1 = spin_operator(3, 1, SpinAxis::X);
    Matrix z3 = spin_operator(3, 3, SpinAxis::Z);
    CHECK(max_abs(x1 * z3 - z3 * x1) < 1e-14);
}

TEST_CASE("spin_operator validates its arguments") {
    CHECK_THROWS_AS(spin_operator(2, 0, SpinAxis::X), std::out_of_range);
    CHECK_THROWS_AS(spin_operator(2, 3, SpinAxis::X), std::out_of_range);
    CHECK_THROWS_AS(spin_operator(0, 1, SpinAxis::X), std::invalid_argument);
    CHECK_THROWS_AS(heisenberg(2, 1, 1), std::invalid_argument);
}

TEST_CASE("two-spin coupling equals SWAP/2 - I/4 with the known spectrum") {
    Matrix h = heisenberg(2, 1, 2);
    CHECK(max_abs(h - (0.5 * testutil::swap_gate() - 0.25 * identity(4))) < 1e-14);

    // Oracle: numeric spectrum against the analytic singlet/triplet values.
    Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
    CHECK(eig.eigenvalues()(0) == doctest::Approx(-0.75).epsilon(1e-12));
    for (int k = 1; k < 4; ++k)
        CHECK(eig.eigenvalues()(k) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("coupling acts on the named pair only") {
    // S_1.S_3 on three spins, checked against the permutation identity
    // S_i.S_j = P_ij/2 - I/4 with a hand-built permutation.
    Matrix h = heisenberg(3, 1, 3);
    CHECK(max_abs(h - (0.5 * swap_permutation(3, 1, 3) - 0.25 * identity(8))) < 1e-14);
}

TEST_CASE("zeeman is diagonal with entries summing signed g*B/2") {
    DeviceConfig config = demo_device();
    config.g_factors = {1.0, 1.5, 0.7, 2.0};
    config.field_tesla = 0.8;
    Matrix hz = zeeman(config);
    for (int b = 0; b < 16; ++b) {
        double expected = 0.0;
        for (int s = 0; s < 4; ++s) {
            const double sign = ((b >> (3 - s)) & 1) ? -0.5 : 0.5;
            expected += config.g_factors[s] * config.field_tesla * sign;
        }
        for (int c = 0; c < 16; ++c)
            CHECK(std::abs(hz(b, c) - (b == c ? expected : 0.0)) < 1e-14);
    }
}

TEST_CASE("uniform-g zeeman commutes with every coupling") {
    DeviceConfig config = demo_device();
    config.g_factors = {1.3, 1.3, 1.3, 1.3};
    Matrix hz = zeeman(config);
    for (auto [i, j] : {std::pair{1, 2}, {2, 3}, {1, 4}}) {
        Matrix h = heisenberg(4, i, j);
        CHECK(max_abs(hz * h - h * hz) < 1e-12);
    }
}

TEST_CASE("total S^z is conserved by zeeman and couplings") {
    std::mt19937_64 rng(202);
    Matrix sz = total_spin_z(4);
    DeviceConfig config = demo_device();
    std::uniform_real_distribution<double> gdist(0.5, 2.5);
    for (int trial = 0; trial < 20; ++trial) {
        for (double& g : config.g_factors) g = gdist(rng);
        Matrix hz = zeeman(config);
        CHECK(max_abs(hz * sz - sz * hz) < 1e-12);
    }
    for (int i = 1; i <= 4; ++i)
        for (int j = i + 1; j <= 4; ++j) {
            Matrix h = heisenberg(4, i, j);
            CHECK(max_abs(h * sz - sz * h) < 1e-12);
        }
}

TEST_CASE("exchange_gate(pi) is SWAP up to a global phase") {
    EquivalenceReport rep = compare_up_to_global_phase(testutil::swap_gate(),
                                                       exchange_gate(2, 1, 2, kPi));
    CHECK(rep.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    // The phase is fixed by the singlet/triplet eigenphases.
    CHECK(std::abs(rep.global_phase - std::polar(1.0, -kPi / 4.0)) < 1e-12);
}

TEST_CASE("exchange_gate(pi) conjugation swaps site operators") {
    Matrix u = exchange_gate(3, 2, 3, kPi);
    for (SpinAxis axis : {SpinAxis::X, SpinAxis::Y, SpinAxis::Z}) {
        Matrix lhs = u * spin_operator(3, 2, axis) * u.adjoint();
        CHECK(max_abs(lhs - spin_operator(3, 3, axis)) < kAlgebraTol);
    }
}

TEST_CASE("rotation_gate matches the half-angle formula and is 4pi-periodic") {
    std::mt19937_64 rng(203);
    std::uniform_real_distribution<double> angle(-2.0 * kPi, 2.0 * kPi);
    for (int trial = 0; trial < 20; ++trial) {
        const double theta = angle(rng);
        for (char a : {'x', 'y', 'z'}) {
            const SpinAxis axis = a == 'x' ? SpinAxis::X : (a == 'y' ? SpinAxis::Y : SpinAxis::Z);
            Matrix expected = std::cos(theta / 2.0) * identity(2) -
                              Complex(0.0, 2.0 * std::sin(theta / 2.0)) * testutil::sigma_half(a);
            CHECK(max_abs(rotation_gate(1, 1, axis, theta) - expected) < 1e-12);
        }
    }
    CHECK(max_abs(rotation_gate(2, 1, SpinAxis::Z, 2.0 * kPi) + identity(4)) < 1e-12);
}

TEST_CASE("layout factories produce the documented bond patterns") {
    DeviceConfig lon = make_layout(Layout::longitudinal_1d, 2);
    REQUIRE(lon.n_spins == 4);
    std::set<std::pair<int, int>> lon_pairs;
    for (const Bond& b : lon.bonds) lon_pairs.emplace(b.i, b.j);
    CHECK(lon_pairs == std::set<std::pair<int, int>>{{1, 2}, {2, 3}, {3, 4}});

    DeviceConfig vert = make_layout(Layout::vertical_1d, 3);
    std::set<std::pair<int, int>> vert_pairs;
    for (const Bond& b : vert.bonds) vert_pairs.emplace(b.i, b.j);
    CHECK(vert_pairs ==
          std::set<std::pair<int, int>>{{1, 2}, {3, 4}, {5, 6}, {1, 3}, {2, 4}, {3, 5}, {4, 6}});

    // 2x2 grids: every qubit keeps its intra bond and touches each neighbour.
    DeviceConfig h2d = make_layout(Layout::horizontal_2d, 4, 2);
    CHECK(h2d.bonds.size() == 4 + 2 + 2 * 2);
    DeviceConfig v2d = make_layout(Layout::vertical_2d, 4, 2);
    CHECK(v2d.bonds.size() == 4 + 2 + 2 * 2);
    validate_device(h2d);
    validate_device(v2d);
}

TEST_CASE("validate_device rejects a bond set that contradicts the layout tag") {
    DeviceConfig config = make_layout(Layout::longitudinal_1d, 2);
    config.bonds.push_back({1, 4, 1.0});
    CHECK_THROWS_AS(validate_device(config), std::invalid_argument);
    config.bonds.pop_back();
    config.layout = Layout::custom;
    config.bonds.push_back({1, 4, 1.0});
    validate_device(config);  // custom layouts accept any well-formed bond set
}

TEST_CASE("device helpers expose pair structure") {
    DeviceConfig config = demo_device();
    CHECK(config.n_qubits() == 2);
    CHECK(config.delta_g(1) == doctest::Approx(0.5));
    CHECK(config.delta_g(2) == doctest::Approx(0.5));
    CHECK(config.find_bond(3, 2).i == 2);
    CHECK(config.has_bond(2, 3));
    CHECK(!config.has_bond(1, 3));
    CHECK_THROWS_AS(config.find_bond(1, 3), std::invalid_argument);
    CHECK_THROWS_AS(config.delta_g(3), std::out_of_range);
}

TEST_CASE("device config parses from JSON and rejects malformed input") {
    const std::string good = R"({
        "n_spins": 4,
        "g_factors": [1.0, 1.5, 1.0, 1.5],
        "field_tesla": 2.0,
        "bonds": [[1, 2, 1.0], [3, 4, 1.0], [2, 3, 0.5]],
        "layout": "longitudinal-1d"
    })";
    DeviceConfig config = device_from_json_text(good);
    CHECK(config.field_tesla == doctest::Approx(2.0));
    CHECK(config.find_bond(2, 3).j_max_mev == doctest::Approx(0.5));
    CHECK(config.layout == Layout::longitudinal_1d);

    CHECK_THROWS_AS(device_from_json_text("{"), std::invalid_argument);
    CHECK_THROWS_AS(device_from_json_text(R"({"n_spins": 2})"), std::invalid_argument);
    CHECK_THROWS_AS(device_from_json_text(R"({
        "n_spins": 4, "g_factors": [1.0, 1.5, 1.0],
        "field_tesla": 1.0, "bonds": [], "layout": "custom"
    })"), std::invalid_argument);
    CHECK_THROWS_AS(device_from_json_text(R"({
        "n_spins": 4, "g_factors": [1.0, 1.5, 1.0, 1.5],
        "field_tesla": 1.0, "bonds": [[1, 2, 1.0], [1, 2, 2.0]], "layout": "custom"
    })"), std::invalid_argument);
    CHECK_THROWS_AS(device_from_json_text(R"({
        "n_spins": 4, "g_factors": [1.0, 1.5, 1.0, 1.5],
        "field_tesla": 1.0, "bonds": [], "layout": "ring"
    })"), std::invalid_argument);
}
