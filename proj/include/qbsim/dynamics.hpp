// dynamics.hpp: charging and aging of the cavity battery
//
// The charging Hamiltonian is written in the frame rotating with the cavity,
// where the detuned free terms of the effective model drop out:
//     H_beta = -hbar lambda_ab |beta| (a e^{-i theta_b} + a^dagger e^{i theta_b}).
// The cavity decays at energy rate gamma through the single jump operator a.

#pragma once

#include "qbsim/hilbert.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qbsim::dynamics {

struct ChargingDrive {
    double lambda_ab = 0.0;  // rad/s
    double beta_mag = 0.0;   // |beta|
    double theta_b = 0.0;    // drive phase, rad

    complex beta() const;
    void validate() const;
};

Operator charge_hamiltonian(const ChargingDrive& drive, FockSpace space);

struct LindbladConfig {
    double dt = 0.0;     // s
    double t_end = 0.0;  // s
    std::size_t snapshot_stride = 100;
    FockSpace space{2};
    double omega_a = 0.0;   // rad/s, energy quantum for bookkeeping only
    double rate_hint = 0.0; // rad/s; 0 estimates the drive rate from max |H_ij| / hbar
    DensityTolerances tolerances{};
};

struct Snapshot {
    std::size_t step = 0;
    double time = 0.0;
    DensityMatrix rho;
};

struct Trajectory {
    std::vector<double> times;         // s
    std::vector<double> mean_photons;  // <a^dagger a>
    std::vector<double> energy;        // J, hbar omega_a <n>
    std::vector<double> power;         // W, hbar omega_a d<n>/dt from the generator
    std::vector<double> trace;
    std::vector<double> purity;
    std::vector<complex> mean_field;   // <a>
    std::vector<Snapshot> snapshots;
    std::vector<std::string> diagnostics;
};

// Classic RK4 on d rho/dt = -(i/hbar)[H, rho] + (gamma/2)(2 a rho a^+ - a^+a rho - rho a^+a).
// Observables are recorded every step; density matrices every snapshot_stride
// steps (and at the last step), each re-validated. Throws InvariantViolation
// naming the step and quantity when a snapshot fails.
Trajectory lindblad_evolve(const Operator& hamiltonian, double gamma, const DensityMatrix& rho0,
                           const LindbladConfig& cfg);

// <a^dagger a>(t) = 4 lambda^2 |beta|^2 (1 - e^{-gamma t/2})^2 / gamma^2, and
// lambda^2 |beta|^2 t^2 when gamma = 0.
double analytic_mean_photons(double t, const ChargingDrive& drive, double gamma);
double steady_state_photons(const ChargingDrive& drive, double gamma);

// hbar omega_a d<n>/dt = (4 hbar omega_a lambda^2 |beta|^2 / gamma)(e^{-gamma t/2} - e^{-gamma t}).
double charging_power(double t, const ChargingDrive& drive, double gamma, double omega_a);

// Time of maximum charging power, 2 ln 2 / gamma.
double peak_power_time(double gamma);

// alpha(t) = (2 i lambda beta / gamma)(1 - e^{-gamma t/2}); the cavity stays in |alpha(t)>.
complex coherent_trajectory(double t, const ChargingDrive& drive, double gamma);

// Free decay after the charger is switched off.
double aging_mean_photons(double tau, double n_max, double gamma);
CoherentState aging_state(double tau, complex alpha0, double gamma, FockSpace space);

} // namespace qbsim::dynamics
