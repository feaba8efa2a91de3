// Time-dependent evolution of pulse schedules.
//
// A schedule is an ordered list of segments; each segment holds per-bond
// exchange drives (constant or sinusoidally modulated) and a flag for the
// static Zeeman term.  Constant segments evolve by a single exact
// exponential; modulated ones by short piecewise-constant exponential steps
// (fourth-order Gauss-node splitting) with automatic step doubling until
// the final unitary is stable.  All times and energies are in natural units
// (hbar = mu_B = 1); physical-unit conversion lives in the compiler.
#pragma once

#include <map>
#include <utility>
#include <vector>

#include "spinpair/encoding.hpp"
#include "spinpair/linalg.hpp"
#include "spinpair/spin_system.hpp"

namespace spinpair {

struct BondDrive {
    bool modulated = false;
    double constant_j = 0.0;  // used when !modulated
    double amplitude = 0.0;   // J(t) = amplitude * sin(carrier * t + phase)
    double carrier = 0.0;     // angular frequency; t is measured from segment start
    double phase = 0.0;
    double value_at(double t_local) const;
};

struct PulseSegment {
    double duration = 0.0;  // must be positive and finite
    std::map<std::pair<int, int>, BondDrive> bond_couplings;
    bool zeeman_active = true;
};

struct PulseSchedule {
    DeviceConfig device;
    std::vector<PulseSegment> segments;  // may be empty (identity evolution)
    double total_duration() const;
    double zeeman_time() const;  // summed duration of segments with the field active
};

struct SimulationResult {
    Matrix final_unitary;
    // (time, leakage) samples accumulated when a basis is supplied to evolve;
    // time is measured from the start of the schedule.
    std::vector<std::pair<double, double>> leakage_trace;
    long step_count = 0;
    // Sum over modulated segments of the operator-norm change at the last
    // step doubling; zero for schedules made purely of constant segments.
    double convergence_estimate = 0.0;
};

// Time-ordered evolution of the whole schedule.  Throws std::runtime_error
// if a modulated segment fails to stabilise within the step cap.
SimulationResult evolve(const PulseSchedule& schedule,
                        const SubspaceBasis* leakage_basis = nullptr);

// exp(+i h0 t) * u: removes the free evolution generated by h0.
Matrix rotating_frame(const Matrix& u, const Matrix& h0, double t);

// Resonance frequency |delta_g * B| of a single two-spin qubit.  Rejects
// devices with more than one pair or with a vanishing splitting.
double rabi_frequency(const DeviceConfig& config);

// The two-spin device seen by one qubit of a larger register: its pair of g
// factors, the shared field, and the intra-pair bond.
DeviceConfig single_qubit_config(const DeviceConfig& config, int qubit);

// Placement of a resonant pulse inside a larger schedule.
struct ResonantPulseSpec {
    int qubit = 1;
    double axis_angle = 0.0;  // rotating-frame axis: 0 drives X, pi/2 drives Y
    double start_time = 0.0;  // Zeeman-active time elapsed before this pulse
};

// One modulated segment on the qubit's intra-pair bond, carrier at the
// qubit's resonance, duration calibrated numerically (secant search on the
// simulated rotation angle, seeded by the rotating-wave estimate) so the
// rotating-frame logical rotation hits target_angle.  target_angle = 0
// yields an empty schedule.  |target_angle| must not exceed 2 pi; j_amp is
// the absolute modulation depth and j_amp / resonance must stay at or below
// 0.1 (above 0.05 a warning goes to stderr).
PulseSchedule synthesize_resonant_pulse(const DeviceConfig& config, double target_angle,
                                        double j_amp);
PulseSchedule synthesize_resonant_pulse(const DeviceConfig& config, double target_angle,
                                        double j_amp, const ResonantPulseSpec& spec);

// idle(t/2), simultaneous calibrated X pi pulses on every qubit, idle(t/2).
// Quenched per-qubit Z disorder accumulated during the idles is refocused.
// j_amp = 0 picks 0.05 times the smallest qubit resonance.
PulseSchedule qubit_echo(const DeviceConfig& config, double idle_time, double j_amp = 0.0);

}  // namespace spinpair
