#include "spinpair/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace spinpair {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kStabilityTol = 1e-8;
constexpr long kStepCap = 1L << 20;

void check_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string("evolve: ") + what + " not finite");
}

void validate_segment(const DeviceConfig& device, const PulseSegment& seg) {
    check_finite(seg.duration, "segment duration");
    if (seg.duration <= 0.0)
        throw std::invalid_argument("evolve: segment duration must be positive");
    for (const auto& [bond, drive] : seg.bond_couplings) {
        if (!device.has_bond(bond.first, bond.second))
            throw std::invalid_argument("evolve: segment drives a bond absent from the device");
        check_finite(drive.constant_j, "bond coupling");
        check_finite(drive.amplitude, "modulation amplitude");
        check_finite(drive.carrier, "modulation carrier");
        check_finite(drive.phase, "modulation phase");
    }
}

// Per-segment generator split into a static part (Zeeman plus constant
// drives) and the modulated bond operators.
struct SegmentGenerator {
    Matrix static_part;
    std::vector<Matrix> bond_ops;
    std::vector<BondDrive> drives;

    bool constant() const { return drives.empty(); }
    Matrix at(double t_local) const {
        Matrix h = static_part;
        for (size_t k = 0; k < drives.size(); ++k)
            h += drives[k].value_at(t_local) * bond_ops[k];
        return h;
    }
};

SegmentGenerator build_generator(const DeviceConfig& device, const PulseSegment& seg,
                                 const Matrix& zeeman_term) {
    const int dim = zeeman_term.rows();
    SegmentGenerator gen;
    gen.static_part = seg.zeeman_active ? zeeman_term : Matrix::Zero(dim, dim);
    for (const auto& [bond, drive] : seg.bond_couplings) {
        const Matrix op = heisenberg(device.n_spins, bond.first, bond.second);
        if (drive.modulated) {
            gen.bond_ops.push_back(op);
            gen.drives.push_back(drive);
        } else {
            gen.static_part += drive.constant_j * op;
        }
    }
    return gen;
}

// One integration step: fourth-order commutator-free scheme built from two
// piecewise-constant exponentials of Gauss-node samples (exact when the
// generator is constant).  Weights 1/4 -+ sqrt(3)/6 on the two nodes.
Matrix cf4_step(const SegmentGenerator& gen, double t_start, double dt) {
    const double node = std::sqrt(3.0) / 6.0;
    const Matrix h1 = gen.at(t_start + (0.5 - node) * dt);
    const Matrix h2 = gen.at(t_start + (0.5 + node) * dt);
    const double x1 = 0.25 - node;
    const double x2 = 0.25 + node;
    return expm_hermitian(x1 * h1 + x2 * h2, dt) * expm_hermitian(x2 * h1 + x1 * h2, dt);
}

Matrix step_product(const SegmentGenerator& gen, double duration, long steps) {
    const double dt = duration / static_cast<double>(steps);
    Matrix u = identity(gen.static_part.rows());
    for (long i = 0; i < steps; ++i) u = cf4_step(gen, static_cast<double>(i) * dt, dt) * u;
    return u;
}

long initial_steps(const SegmentGenerator& gen, double duration) {
    double w_max = 0.0;
    for (const BondDrive& d : gen.drives) w_max = std::max(w_max, std::abs(d.carrier));
    long n = 64;
    if (w_max > 0.0) {
        const double per_period = 32.0;
        n = std::max(n, static_cast<long>(std::ceil(duration * w_max * per_period / (2.0 * kPi))));
    }
    return std::min(n, kStepCap / 2);
}

// ---------- resonant pulse calibration ----------

// Rotation angle of a 2x2 unitary, folded into [0, pi]; the caller picks
// between theta and 2 pi - theta using its running estimate.
double folded_rotation_angle(const Matrix& v) {
    const Complex det = v(0, 0) * v(1, 1) - v(0, 1) * v(1, 0);
    const Complex trace = (v(0, 0) + v(1, 1)) / std::sqrt(det);
    const double c = std::clamp(std::abs(trace.real()) / 2.0, 0.0, 1.0);
    return 2.0 * std::acos(c);
}

double pick_branch(double folded, double estimate) {
    const double other = 2.0 * kPi - folded;
    return std::abs(folded - estimate) <= std::abs(other - estimate) ? folded : other;
}

PulseSegment resonant_segment(int site_a, int site_b, double duration, double j_amp,
                              double omega, double phi0) {
    PulseSegment seg;
    seg.duration = duration;
    seg.zeeman_active = true;
    BondDrive drive;
    drive.modulated = true;
    drive.amplitude = j_amp;
    drive.carrier = omega;
    drive.phase = phi0;
    seg.bond_couplings[{site_a, site_b}] = drive;
    return seg;
}

// Simulated rotating-frame rotation angle of a single X pulse of the given
// duration on a two-spin device.
double simulated_angle(const DeviceConfig& pair, double duration, double j_amp, double omega,
                       double estimate) {
    PulseSchedule probe;
    probe.device = pair;
    probe.segments.push_back(resonant_segment(1, 2, duration, j_amp, omega, kPi / 2.0));
    const SimulationResult sim = evolve(probe);
    const Matrix rotated = rotating_frame(sim.final_unitary, zeeman(pair), duration);
    const Matrix logical = restrict_to(rotated, logical_qubit_basis(1, 2, 2).vectors);
    return pick_branch(folded_rotation_angle(logical), estimate);
}

// Secant search for the pulse duration that delivers the target rotation,
// seeded by the rotating-wave estimate 2 theta / j_amp.
double calibrate_duration(const DeviceConfig& pair, double theta, double j_amp, double omega) {
    const double rabi_rate = j_amp / 2.0;
    double t_prev = 2.0 * theta / j_amp;
    double t_cur = t_prev * 1.02;
    double f_prev = simulated_angle(pair, t_prev, j_amp, omega, rabi_rate * t_prev) - theta;
    for (int iter = 0; iter < 40; ++iter) {
        const double f_cur = simulated_angle(pair, t_cur, j_amp, omega, rabi_rate * t_cur) - theta;
        if (std::abs(f_cur) < 1e-7) return t_cur;
        const double denom = f_cur - f_prev;
        const double step = std::abs(denom) < 1e-15 ? t_cur * 1e-3
                                                    : f_cur * (t_cur - t_prev) / denom;
        t_prev = t_cur;
        f_prev = f_cur;
        t_cur = t_cur - step;
        if (!(t_cur > 0.0)) t_cur = t_prev * 0.5;
    }
    throw std::runtime_error("synthesize_resonant_pulse: duration calibration did not converge");
}

// Guards the rotating-wave ratio and returns the signed logical Z rate.
double checked_splitting(const DeviceConfig& config, int qubit, double j_amp) {
    const double split = -config.delta_g(qubit) * config.field_tesla;
    if (std::abs(split) < 1e-12)
        throw std::invalid_argument("resonant pulse: qubit has no Zeeman splitting");
    const double ratio = j_amp / std::abs(split);
    if (ratio > 0.1)
        throw std::invalid_argument(
            "resonant pulse: modulation depth violates the rotating-wave regime (ratio > 0.1)");
    if (ratio > 0.05)
        std::cerr << "warning: rotating-wave ratio " << ratio
                  << " above 0.05, pulse fidelity degrades\n";
    return split;
}

}  // namespace

double BondDrive::value_at(double t_local) const {
    if (!modulated) return constant_j;
    return amplitude * std::sin(carrier * t_local + phase);
}

double PulseSchedule::total_duration() const {
    double t = 0.0;
    for (const PulseSegment& s : segments) t += s.duration;
    return t;
}

double PulseSchedule::zeeman_time() const {
    double t = 0.0;
    for (const PulseSegment& s : segments)
        if (s.zeeman_active) t += s.duration;
    return t;
}

SimulationResult evolve(const PulseSchedule& schedule, const SubspaceBasis* leakage_basis) {
    validate_device(schedule.device);
    const int dim = 1 << schedule.device.n_spins;
    if (leakage_basis && leakage_basis->vectors.rows() != dim)
        throw std::invalid_argument("evolve: leakage basis dimension does not match the device");

    const Matrix zeeman_term = zeeman(schedule.device);

    SimulationResult result;
    result.final_unitary = identity(dim);
    auto sample = [&](double t, const Matrix& u) {
        if (leakage_basis) result.leakage_trace.emplace_back(t, leakage(u, *leakage_basis));
    };
    sample(0.0, result.final_unitary);

    double t_offset = 0.0;
    for (const PulseSegment& seg : schedule.segments) {
        validate_segment(schedule.device, seg);
        const SegmentGenerator gen = build_generator(schedule.device, seg, zeeman_term);

        Matrix u_seg;
        long accepted_steps = 1;
        if (gen.constant()) {
            u_seg = expm_hermitian(gen.static_part, seg.duration);
        } else {
            long n = initial_steps(gen, seg.duration);
            Matrix u_prev = step_product(gen, seg.duration, n);
            for (;;) {
                const Matrix u_next = step_product(gen, seg.duration, 2 * n);
                const double diff = operator_norm(u_next - u_prev);
                u_prev = u_next;
                n *= 2;
                if (diff < kStabilityTol) {
                    result.convergence_estimate += diff;
                    break;
                }
                if (2 * n > kStepCap)
                    throw std::runtime_error(
                        "evolve: modulated segment did not stabilise within the step cap");
            }
            u_seg = u_prev;
            accepted_steps = n;
        }
        result.step_count += accepted_steps;

        if (leakage_basis) {
            // Recording pass at the accepted resolution; the final unitary
            // itself comes from the product above.
            const long slices = gen.constant() ? 16 : accepted_steps;
            const long stride = std::max(1L, slices / 128);
            const double dt = seg.duration / static_cast<double>(slices);
            Matrix acc = result.final_unitary;
            for (long i = 0; i < slices; ++i) {
                acc = cf4_step(gen, static_cast<double>(i) * dt, dt) * acc;
                if ((i + 1) % stride == 0 || i + 1 == slices)
                    sample(t_offset + (static_cast<double>(i) + 1.0) * dt, acc);
            }
        }

        result.final_unitary = u_seg * result.final_unitary;
        t_offset += seg.duration;
    }
    return result;
}

Matrix rotating_frame(const Matrix& u, const Matrix& h0, double t) {
    return expm_hermitian(h0, -t) * u;
}

double rabi_frequency(const DeviceConfig& config) {
    validate_device(config);
    if (config.n_spins != 2)
        throw std::invalid_argument("rabi_frequency: expects a single two-spin qubit");
    const double omega = std::abs(config.delta_g(1) * config.field_tesla);
    if (omega < 1e-12)
        throw std::invalid_argument("rabi_frequency: resonance undefined for equal g factors");
    return omega;
}

DeviceConfig single_qubit_config(const DeviceConfig& config, int qubit) {
    validate_device(config);
    if (qubit < 1 || qubit > config.n_qubits())
        throw std::out_of_range("single_qubit_config: qubit index out of range");
    const int a = 2 * qubit - 1;
    if (!config.has_bond(a, a + 1))
        throw std::invalid_argument("single_qubit_config: device lacks the qubit's intra-pair bond");
    const Bond& intra = config.find_bond(a, a + 1);

    DeviceConfig pair;
    pair.n_spins = 2;
    pair.g_factors = {config.g_factors[a - 1], config.g_factors[a]};
    pair.field_tesla = config.field_tesla;
    pair.bonds = {{1, 2, intra.j_max_mev}};
    pair.layout = Layout::longitudinal_1d;
    return pair;
}

PulseSchedule synthesize_resonant_pulse(const DeviceConfig& config, double target_angle,
                                        double j_amp) {
    return synthesize_resonant_pulse(config, target_angle, j_amp, ResonantPulseSpec{});
}

PulseSchedule synthesize_resonant_pulse(const DeviceConfig& config, double target_angle,
                                        double j_amp, const ResonantPulseSpec& spec) {
    validate_device(config);
    if (spec.qubit < 1 || spec.qubit > config.n_qubits())
        throw std::out_of_range("synthesize_resonant_pulse: qubit index out of range");

    PulseSchedule schedule;
    schedule.device = config;
    if (target_angle == 0.0) return schedule;
    if (!std::isfinite(target_angle) || std::abs(target_angle) > 2.0 * kPi)
        throw std::invalid_argument(
            "synthesize_resonant_pulse: target angle must lie in [-2 pi, 2 pi]");
    if (!(j_amp > 0.0))
        throw std::invalid_argument("synthesize_resonant_pulse: modulation depth must be positive");

    double theta = target_angle;
    double beta = spec.axis_angle;
    if (theta < 0.0) {  // rotate the opposite way about the same axis
        theta = -theta;
        beta += kPi;
    }

    const double split = checked_splitting(config, spec.qubit, j_amp);
    const double omega = std::abs(split);
    const double sigma = split > 0.0 ? 1.0 : -1.0;

    const DeviceConfig pair = single_qubit_config(config, spec.qubit);
    const double duration = calibrate_duration(pair, theta, j_amp, omega);

    // Carrier phase putting the rotating-frame drive axis at beta, given the
    // Zeeman-active time already elapsed when the segment starts.
    const double phi0 = kPi / 2.0 + sigma * beta + omega * spec.start_time;
    const int site_a = 2 * spec.qubit - 1;
    schedule.segments.push_back(resonant_segment(site_a, site_a + 1, duration, j_amp, omega, phi0));
    return schedule;
}

PulseSchedule qubit_echo(const DeviceConfig& config, double idle_time, double j_amp) {
    validate_device(config);
    if (!(idle_time >= 0.0) || !std::isfinite(idle_time))
        throw std::invalid_argument("qubit_echo: idle time must be nonnegative");

    const int nq = config.n_qubits();
    std::vector<double> omegas(nq);
    double omega_min = 0.0;
    for (int q = 1; q <= nq; ++q) {
        const double omega = std::abs(config.delta_g(q) * config.field_tesla);
        if (omega < 1e-12)
            throw std::invalid_argument("qubit_echo: a qubit has no Zeeman splitting");
        omegas[q - 1] = omega;
        omega_min = q == 1 ? omega : std::min(omega_min, omega);
    }
    if (j_amp == 0.0) j_amp = 0.05 * omega_min;
    for (int q = 1; q <= nq; ++q) (void)checked_splitting(config, q, j_amp);

    // One shared pulse window: calibrate each qubit alone, then use the mean
    // duration.  The per-qubit angle error this leaves is second order in
    // the rotating-wave ratio.
    double mean_duration = 0.0;
    for (int q = 1; q <= nq; ++q)
        mean_duration += calibrate_duration(single_qubit_config(config, q), kPi, j_amp,
                                            omegas[q - 1]);
    mean_duration /= static_cast<double>(nq);

    PulseSchedule schedule;
    schedule.device = config;
    const double half_idle = idle_time / 2.0;
    PulseSegment idle;
    idle.duration = half_idle;
    idle.zeeman_active = true;
    if (half_idle > 0.0) schedule.segments.push_back(idle);

    PulseSegment pulses;
    pulses.duration = mean_duration;
    pulses.zeeman_active = true;
    for (int q = 1; q <= nq; ++q) {
        BondDrive drive;
        drive.modulated = true;
        drive.amplitude = j_amp;
        drive.carrier = omegas[q - 1];
        drive.phase = kPi / 2.0 + omegas[q - 1] * half_idle;
        pulses.bond_couplings[{2 * q - 1, 2 * q}] = drive;
    }
    schedule.segments.push_back(pulses);

    if (half_idle > 0.0) schedule.segments.push_back(idle);
    return schedule;
}

}  // namespace spinpair
