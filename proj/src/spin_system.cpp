#include "spinpair/spin_system.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace spinpair {

namespace {

constexpr int kMaxSpins = 12;  // dense 2^n matrices; enough for every layout we test

void check_register(int n_spins) {
    if (n_spins < 1 || n_spins > kMaxSpins)
        throw std::invalid_argument("spin register size must be in 1.." + std::to_string(kMaxSpins));
}

void check_site(int n_spins, int site) {
    if (site < 1 || site > n_spins)
        throw std::out_of_range("spin index " + std::to_string(site) + " outside 1.." +
                                std::to_string(n_spins));
}

Matrix one_spin(SpinAxis axis) {
    Matrix s = Matrix::Zero(2, 2);
    switch (axis) {
        case SpinAxis::X:
            s(0, 1) = 0.5;
            s(1, 0) = 0.5;
            break;
        case SpinAxis::Y:
            s(0, 1) = Complex(0.0, -0.5);
            s(1, 0) = Complex(0.0, 0.5);
            break;
        case SpinAxis::Z:
            s(0, 0) = 0.5;
            s(1, 1) = -0.5;
            break;
    }
    return s;
}

}  // namespace

Matrix spin_operator(int n_spins, int site, SpinAxis axis) {
    check_register(n_spins);
    check_site(n_spins, site);
    Matrix op = (site == 1) ? one_spin(axis) : identity(2);
    for (int k = 2; k <= n_spins; ++k) op = kron(op, k == site ? one_spin(axis) : identity(2));
    return op;
}

Matrix total_spin_z(int n_spins) {
    check_register(n_spins);
    const Eigen::Index dim = Eigen::Index(1) << n_spins;
    Matrix op = Matrix::Zero(dim, dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        double m = 0.0;
        for (int s = 0; s < n_spins; ++s)
            m += ((b >> (n_spins - 1 - s)) & 1) ? -0.5 : 0.5;
        op(b, b) = m;
    }
    return op;
}

Matrix heisenberg(int n_spins, int site_i, int site_j) {
    check_register(n_spins);
    check_site(n_spins, site_i);
    check_site(n_spins, site_j);
    if (site_i == site_j) throw std::invalid_argument("heisenberg: coupling a spin to itself");
    Matrix sum = Matrix::Zero(Eigen::Index(1) << n_spins, Eigen::Index(1) << n_spins);
    for (SpinAxis axis : {SpinAxis::X, SpinAxis::Y, SpinAxis::Z})
        sum += spin_operator(n_spins, site_i, axis) * spin_operator(n_spins, site_j, axis);
    return sum;
}

Matrix exchange_gate(int n_spins, int site_i, int site_j, double theta) {
    return expm_hermitian(heisenberg(n_spins, site_i, site_j), theta);
}

Matrix rotation_gate(int n_spins, int site, SpinAxis axis, double theta) {
    return expm_hermitian(spin_operator(n_spins, site, axis), theta);
}

// ---------- device description ----------

std::string layout_name(Layout layout) {
    switch (layout) {
        case Layout::longitudinal_1d: return "longitudinal-1d";
        case Layout::vertical_1d: return "vertical-1d";
        case Layout::horizontal_2d: return "horizontal-2d";
        case Layout::vertical_2d: return "vertical-2d";
        case Layout::custom: return "custom";
    }
    throw std::invalid_argument("layout_name: unknown layout");
}

Layout layout_from_name(const std::string& name) {
    if (name == "longitudinal-1d") return Layout::longitudinal_1d;
    if (name == "vertical-1d") return Layout::vertical_1d;
    if (name == "horizontal-2d") return Layout::horizontal_2d;
    if (name == "vertical-2d") return Layout::vertical_2d;
    if (name == "custom") return Layout::custom;
    throw std::invalid_argument("unknown layout tag: " + name);
}

double DeviceConfig::delta_g(int qubit) const {
    if (qubit < 1 || qubit > n_qubits())
        throw std::out_of_range("qubit index " + std::to_string(qubit) + " outside 1.." +
                                std::to_string(n_qubits()));
    return g_factors[2 * qubit - 1] - g_factors[2 * qubit - 2];
}

bool DeviceConfig::has_bond(int i, int j) const {
    const int lo = std::min(i, j), hi = std::max(i, j);
    return std::any_of(bonds.begin(), bonds.end(),
                       [&](const Bond& b) { return b.i == lo && b.j == hi; });
}

const Bond& DeviceConfig::find_bond(int i, int j) const {
    const int lo = std::min(i, j), hi = std::max(i, j);
    for (const Bond& b : bonds)
        if (b.i == lo && b.j == hi) return b;
    throw std::invalid_argument("device has no bond (" + std::to_string(lo) + ", " +
                                std::to_string(hi) + ")");
}

namespace {

// Bond index pairs (without coupling strengths) implied by a named layout.
std::set<std::pair<int, int>> layout_pairs(Layout layout, int n_qubits, int grid_cols) {
    std::set<std::pair<int, int>> pairs;
    auto add = [&pairs](int a, int b) { pairs.emplace(std::min(a, b), std::max(a, b)); };
    for (int q = 1; q <= n_qubits; ++q) add(2 * q - 1, 2 * q);

    switch (layout) {
        case Layout::longitudinal_1d:
            for (int q = 1; q < n_qubits; ++q) add(2 * q, 2 * q + 1);
            break;
        case Layout::vertical_1d:
            for (int q = 1; q < n_qubits; ++q) {
                add(2 * q - 1, 2 * q + 1);
                add(2 * q, 2 * q + 2);
            }
            break;
        case Layout::horizontal_2d:
        case Layout::vertical_2d: {
            if (grid_cols < 1 || n_qubits % grid_cols != 0)
                throw std::invalid_argument("2d layout needs a column count dividing the qubit count");
            const int rows = n_qubits / grid_cols;
            auto qid = [grid_cols](int r, int c) { return r * grid_cols + c + 1; };
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < grid_cols; ++c) {
                    const int q = qid(r, c);
                    if (layout == Layout::horizontal_2d) {
                        if (c + 1 < grid_cols) add(2 * q, 2 * qid(r, c + 1) - 1);
                        if (r + 1 < rows) {
                            add(2 * q - 1, 2 * qid(r + 1, c) - 1);
                            add(2 * q, 2 * qid(r + 1, c));
                        }
                    } else {
                        if (r + 1 < rows) add(2 * q, 2 * qid(r + 1, c) - 1);
                        if (c + 1 < grid_cols) {
                            add(2 * q - 1, 2 * qid(r, c + 1) - 1);
                            add(2 * q, 2 * qid(r, c + 1));
                        }
                    }
                }
            break;
        }
        case Layout::custom:
            throw std::invalid_argument("custom layout has no fixed pattern");
    }
    return pairs;
}

}  // namespace

void validate_device(const DeviceConfig& config) {
    check_register(config.n_spins);
    if (static_cast<int>(config.g_factors.size()) != config.n_spins)
        throw std::invalid_argument("g_factors size must equal n_spins");

    std::set<std::pair<int, int>> seen;
    for (const Bond& b : config.bonds) {
        if (b.i < 1 || b.i > config.n_spins || b.j < 1 || b.j > config.n_spins)
            throw std::invalid_argument("bond spin index out of range");
        if (b.i >= b.j) throw std::invalid_argument("bonds must satisfy i < j");
        if (!(b.j_max_mev > 0.0)) throw std::invalid_argument("bond j_max must be positive");
        if (!seen.emplace(b.i, b.j).second) throw std::invalid_argument("duplicate bond");
    }

    if (config.layout != Layout::custom) {
        if (config.n_spins % 2 != 0)
            throw std::invalid_argument("named layouts require an even spin count");
        const int n_q = config.n_qubits();
        bool matched = false;
        if (config.layout == Layout::horizontal_2d || config.layout == Layout::vertical_2d) {
            for (int cols = 1; cols <= n_q && !matched; ++cols)
                if (n_q % cols == 0) matched = (seen == layout_pairs(config.layout, n_q, cols));
        } else {
            matched = (seen == layout_pairs(config.layout, n_q, 0));
        }
        if (!matched)
            throw std::invalid_argument("bond set does not match the declared layout pattern");
    }
}

Matrix zeeman(const DeviceConfig& config) {
    validate_device(config);
    const Eigen::Index dim = Eigen::Index(1) << config.n_spins;
    Matrix op = Matrix::Zero(dim, dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
        double e = 0.0;
        for (int s = 0; s < config.n_spins; ++s) {
            const double m = ((b >> (config.n_spins - 1 - s)) & 1) ? -0.5 : 0.5;
            e += config.g_factors[s] * config.field_tesla * m;
        }
        op(b, b) = e;
    }
    return op;
}

DeviceConfig make_layout(Layout layout, int n_qubits, int grid_cols, double j_intra_mev,
                         double j_inter_mev, double g_first, double g_second,
                         double field_tesla) {
    if (layout == Layout::custom)
        throw std::invalid_argument("make_layout: custom layouts are built by hand");
    if (n_qubits < 1) throw std::invalid_argument("make_layout: need at least one qubit");
    if (layout == Layout::longitudinal_1d || layout == Layout::vertical_1d) grid_cols = 0;

    DeviceConfig config;
    config.n_spins = 2 * n_qubits;
    config.field_tesla = field_tesla;
    config.layout = layout;
    for (int q = 0; q < n_qubits; ++q) {
        config.g_factors.push_back(g_first);
        config.g_factors.push_back(g_second);
    }
    for (const auto& [i, j] : layout_pairs(layout, n_qubits, grid_cols)) {
        const bool intra = (j == i + 1) && (i % 2 == 1);
        config.bonds.push_back({i, j, intra ? j_intra_mev : j_inter_mev});
    }
    validate_device(config);
    return config;
}

// ---------- config files ----------

DeviceConfig device_from_json_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("device config: ") + e.what());
    }
    DeviceConfig config;
    try {
        config.n_spins = doc.at("n_spins").get<int>();
        config.g_factors = doc.at("g_factors").get<std::vector<double>>();
        config.field_tesla = doc.at("field_tesla").get<double>();
        for (const auto& entry : doc.at("bonds")) {
            if (!entry.is_array() || entry.size() != 3)
                throw std::invalid_argument("device config: each bond must be [i, j, j_max_mev]");
            config.bonds.push_back(
                {entry[0].get<int>(), entry[1].get<int>(), entry[2].get<double>()});
        }
        config.layout = layout_from_name(doc.value("layout", "custom"));
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("device config: ") + e.what());
    }
    validate_device(config);
    return config;
}

DeviceConfig load_device(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open device config: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return device_from_json_text(buffer.str());
}

}  // namespace spinpair
