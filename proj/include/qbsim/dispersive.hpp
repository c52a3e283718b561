// dispersive.hpp: raw circuit parameters to the effective beam-splitter model
//
// All frequencies are angular, in rad/s. Detunings follow Delta_x = omega_q - omega_x.

#pragma once

#include <string>
#include <vector>

namespace qbsim::dispersive {

struct CircuitParams {
    double omega_a = 0.0;  // cavity
    double omega_q = 0.0;  // qubit charger
    double omega_b = 0.0;  // drive-field centre
    double g_a = 0.0;      // qubit-cavity coupling
    double g_b = 0.0;      // qubit-drive coupling
    double gamma = 0.0;    // cavity energy decay rate
};

struct DispersiveParams {
    double delta_a = 0.0;
    double delta_b = 0.0;
    double chi_a = 0.0;      // g_a^2 / delta_a
    double chi_b = 0.0;      // g_b^2 / delta_b
    double lambda_ab = 0.0;  // g_a g_b (delta_a + delta_b) / (delta_a delta_b)
    double ratio_a = 0.0;    // g_a / |delta_a|
    double ratio_b = 0.0;    // g_b / |delta_b|
};

// Throws ValidationError for non-finite inputs, omega_a <= 0, gamma <= 0, or a
// vanishing detuning (the message names which one).
DispersiveParams dispersive_map(const CircuitParams& params);

inline constexpr double default_validity_threshold = 0.1;

struct ValidityFlag {
    std::string name;   // "ratio_a" or "ratio_b"
    double ratio = 0.0;
    double threshold = 0.0;
    bool ok = false;    // ratio < threshold, strictly
};

struct ValidityReport {
    std::vector<ValidityFlag> flags;
    bool ok() const;
};

ValidityReport validity_check(const DispersiveParams& d,
                              double threshold = default_validity_threshold);

// Qubit frequency at which delta_a = -delta_b, i.e. lambda_ab = 0.
double switch_frequency(double omega_a, double omega_b);

} // namespace qbsim::dispersive
