// readout.hpp: non-destructive photon-number readout through the charger
//
// A probe photon at omega_k scattering off the dispersively shifted qubit is
// transmitted with amplitude
//     t = iD / (iD - Gamma),  D = (omega_k - omega_q) - g_a^2/(2 Delta_a) - g_a^2 n / Delta_a,
// where Gamma = g_l^2 / v_g is the qubit's decay rate into the line. Only the
// stored photon number n enters; the battery state is never touched.

#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace qbsim::readout {

struct ReadoutParams {
    double omega_q = 0.0;
    double omega_a = 0.0;
    double g_a = 0.0;
    double line_rate = 0.0;  // Gamma

    double delta_a() const { return omega_q - omega_a; }
    void validate() const;
};

// Probe detuning D from the dressed qubit line.
double dressed_detuning(double omega_k, double n_bar, const ReadoutParams& p);

// |t|^2 = D^2 / (D^2 + Gamma^2) as a function of the dressed detuning itself.
double line_shape(double detuning, double line_rate);

std::complex<double> transmission_amplitude(double omega_k, double n_bar, const ReadoutParams& p);
double transmission(double omega_k, double n_bar, const ReadoutParams& p);

// Probe frequency of zero transmission: omega_q + g_a^2 (1/2 + n) / Delta_a.
double dip_frequency(double n_bar, const ReadoutParams& p);

struct Spectrum {
    std::vector<double> probe;         // rad/s
    std::vector<double> transmission;  // |t|^2
    double n_bar = 0.0;
    std::vector<std::string> diagnostics;
};

Spectrum spectrum_sweep(std::span<const double> probe_grid, double n_bar, const ReadoutParams& p);

// Evenly spaced grid of `points` samples over [first, last].
std::vector<double> linear_grid(double first, double last, std::size_t points);

struct PhotonEstimate {
    double n_bar = 0.0;
    double dip_frequency = 0.0;
    std::vector<std::string> diagnostics;
};

// Locates the transmission minimum and inverts the dip formula. The three
// samples around the minimum are refined with a parabola through T/(1-T),
// which is exactly (D/Gamma)^2 for this line shape. Throws ValidationError
// when the minimum sits on the grid boundary.
PhotonEstimate infer_photon_number(const Spectrum& spectrum, const ReadoutParams& p);

} // namespace qbsim::readout
