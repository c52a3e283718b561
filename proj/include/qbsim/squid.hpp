// squid.hpp: flux-tunable SQUID charger
//
// The loop is reduced to a single phase particle,
//     H = (2 pi p / Phi0)^2 / (4C) - U0(phi_d) cos(delta),   [delta, p] = i hbar,
// i.e. a particle of mass m* = 2C (Phi0 / 2pi)^2 in a cosine well of depth U0.
// The kinetic term is discretised with a three-point stencil on a phase grid and
// the lowest levels are extracted from the resulting chain matrix.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace qbsim::squid {

// Which flux sets the well depth: the DC bias alone, or the bias plus both
// zero-point fluxes (phi_d + phi_a~ + phi_b~).
enum class FluxConvention { bias_only, bias_plus_zero_point };

struct SquidParams {
    double critical_current = 0.0;  // A, per junction
    double capacitance = 0.0;       // F, total loop capacitance
    double phi_d = 0.0;             // DC bias, units of Phi0
    double phi_a_tilde = 0.0;       // cavity zero-point flux, units of Phi0
    double phi_b_tilde = 0.0;       // waveguide zero-point flux, units of Phi0
    FluxConvention convention = FluxConvention::bias_only;

    // Throws ValidationError for non-positive I_c or C; returns warnings
    // (zero-point fluxes above 0.05 Phi0).
    std::vector<std::string> validate() const;
    double potential_flux() const;
};

enum class Boundary { periodic, dirichlet };

struct SolverOptions {
    std::size_t n_states = 4;
    std::size_t grid_size = 8192;
    Boundary boundary = Boundary::periodic;
    double window_half_width = 3.141592653589793;  // Dirichlet window [-w, w]
    bool require_bound = true;
};

struct SquidSpectrum {
    std::vector<double> grid;      // delta, rad
    std::vector<double> energies;  // J, ascending
    Eigen::MatrixXd wavefunctions; // row k = state k on the grid, sum_i h psi^2 = 1
    Eigen::MatrixXd mu;            // <i| cos(delta) |j>
    double omega_q = 0.0;          // (E1 - E0) / hbar
    double U0 = 0.0;
    double U1 = 0.0;
    std::size_t n_bound = 0;       // levels below the potential maximum
    std::vector<std::string> diagnostics;
};

// E_J = I_c Phi0 / (2 pi).
double josephson_energy(double critical_current);

struct PotentialCoefficients {
    double U0 = 0.0;  // 2 E_J cos(2 pi phi / Phi0)
    double U1 = 0.0;  // 2 E_J sin(2 pi phi / Phi0)
};

PotentialCoefficients potential_coefficients(const SquidParams& p);

double effective_mass(double capacitance);

// Small-oscillation frequency (2 pi / Phi0) sqrt(U0 / 2C); needs U0 > 0.
double plasma_frequency(const SquidParams& p);

SquidSpectrum solve_levels(const SquidParams& p, const SolverOptions& opts = {});

struct FluxPoint {
    double phi_d = 0.0;  // units of Phi0
    double omega_q = 0.0;
};

// Qubit frequency across bias fluxes; each point is solved independently.
std::vector<FluxPoint> frequency_vs_flux(const SquidParams& p, std::span<const double> phi_grid,
                                         const SolverOptions& opts = {});

struct Couplings {
    double g_a = 0.0;  // 2 pi U1 phi_a~ mu01 / (hbar Phi0), rad/s
    double g_b = 0.0;
    double mu01 = 0.0;
};

Couplings circuit_couplings(const SquidParams& p, const SquidSpectrum& spectrum);

} // namespace qbsim::squid
