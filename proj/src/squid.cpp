#include "qbsim/squid.hpp"

#include "qbsim/constants.hpp"
#include "qbsim/errors.hpp"
#include "qbsim/parallel.hpp"
#include "qbsim/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qbsim::squid {

using constants::flux_quantum;
using constants::hbar;
using constants::two_pi;

std::vector<std::string> SquidParams::validate() const {
    if (!(critical_current > 0.0) || !std::isfinite(critical_current))
        throw ValidationError("squid: critical current must be > 0");
    if (!(capacitance > 0.0) || !std::isfinite(capacitance))
        throw ValidationError("squid: capacitance must be > 0");
    if (!std::isfinite(phi_d) || !std::isfinite(phi_a_tilde) || !std::isfinite(phi_b_tilde))
        throw ValidationError("squid: fluxes must be finite");
    std::vector<std::string> warnings;
    if (std::abs(phi_a_tilde) > 0.05) warnings.push_back("phi_a_tilde exceeds 0.05 Phi0; expansion in small flux is doubtful");
    if (std::abs(phi_b_tilde) > 0.05) warnings.push_back("phi_b_tilde exceeds 0.05 Phi0; expansion in small flux is doubtful");
    return warnings;
}

double SquidParams::potential_flux() const {
    return convention == FluxConvention::bias_only ? phi_d : phi_d + phi_a_tilde + phi_b_tilde;
}

double josephson_energy(double critical_current) {
    if (!(critical_current > 0.0) || !std::isfinite(critical_current))
        throw ValidationError("josephson_energy: critical current must be > 0");
    return critical_current * flux_quantum / two_pi;
}

PotentialCoefficients potential_coefficients(const SquidParams& p) {
    p.validate();
    const double two_ej = 2.0 * josephson_energy(p.critical_current);
    const double angle = two_pi * p.potential_flux();
    return {two_ej * std::cos(angle), two_ej * std::sin(angle)};
}

double effective_mass(double capacitance) {
    const double r = flux_quantum / two_pi;
    return 2.0 * capacitance * r * r;
}

double plasma_frequency(const SquidParams& p) {
    const double u0 = potential_coefficients(p).U0;
    if (!(u0 > 0.0)) throw ValidationError("plasma_frequency: needs a confining well (U0 > 0)");
    return (two_pi / flux_quantum) * std::sqrt(u0 / (2.0 * p.capacitance));
}

SquidSpectrum solve_levels(const SquidParams& p, const SolverOptions& opts) {
    SquidSpectrum out;
    out.diagnostics = p.validate();
    if (opts.grid_size < 512) throw ValidationError("solve_levels: grid_size must be >= 512");
    if (opts.n_states < 2) throw ValidationError("solve_levels: need at least 2 states");
    if (opts.n_states > opts.grid_size) throw ValidationError("solve_levels: more states than grid points");

    const auto coeff = potential_coefficients(p);
    out.U0 = coeff.U0;
    out.U1 = coeff.U1;

    const std::size_t n = opts.grid_size;
    const bool periodic = opts.boundary == Boundary::periodic;
    double h = 0.0;
    out.grid.resize(n);
    if (periodic) {
        h = two_pi / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) out.grid[i] = -constants::pi + h * static_cast<double>(i);
    } else {
        const double w = opts.window_half_width;
        if (!(w > 0.0) || w > constants::pi)
            throw ValidationError("solve_levels: Dirichlet window half-width must lie in (0, pi]");
        h = 2.0 * w / static_cast<double>(n + 1);
        for (std::size_t i = 0; i < n; ++i) out.grid[i] = -w + h * static_cast<double>(i + 1);
    }

    // Work in units of 2 E_J so the matrix entries are O(1).
    const double unit = 2.0 * josephson_energy(p.critical_current);
    const double kinetic = hbar * hbar / (2.0 * effective_mass(p.capacitance) * h * h) / unit;
    const double depth = coeff.U0 / unit;

    tridiagonal::Chain chain;
    chain.periodic = periodic;
    chain.diag.resize(n);
    double v_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double v = -depth * std::cos(out.grid[i]);
        v_max = std::max(v_max, v);
        chain.diag[i] = 2.0 * kinetic + v;
    }
    chain.off.assign(periodic ? n : n - 1, -kinetic);

    out.n_bound = tridiagonal::count_below(chain, v_max);
    if (out.n_bound < opts.n_states) {
        std::ostringstream os;
        os << "solve_levels: only " << out.n_bound << " bound state(s) below the potential maximum at phi_d = "
           << p.phi_d << " Phi0 (" << opts.n_states << " requested)";
        if (opts.require_bound) throw ValidationError(os.str());
        out.diagnostics.push_back(os.str());
    }

    const auto pairs = tridiagonal::lowest_eigenpairs(chain, opts.n_states);
    const auto k = static_cast<Eigen::Index>(opts.n_states);
    out.energies.resize(opts.n_states);
    out.wavefunctions.resize(k, static_cast<Eigen::Index>(n));
    const double amp = 1.0 / std::sqrt(h);
    for (std::size_t s = 0; s < opts.n_states; ++s) {
        out.energies[s] = pairs.values[s] * unit;
        const auto& v = pairs.vectors[s];
        // sign convention: the first sample above half the peak amplitude is positive
        double peak = 0.0;
        for (double x : v) peak = std::max(peak, std::abs(x));
        double sign = 1.0;
        for (double x : v)
            if (std::abs(x) > 0.5 * peak) {
                sign = x < 0.0 ? -1.0 : 1.0;
                break;
            }
        for (std::size_t i = 0; i < n; ++i)
            out.wavefunctions(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i)) = sign * amp * v[i];
    }

    Eigen::VectorXd cos_grid(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) cos_grid(static_cast<Eigen::Index>(i)) = std::cos(out.grid[i]);
    const Eigen::MatrixXd weighted = out.wavefunctions * cos_grid.asDiagonal();
    out.mu = h * weighted * out.wavefunctions.transpose();
    out.mu = 0.5 * (out.mu + out.mu.transpose()).eval();

    out.omega_q = (out.energies[1] - out.energies[0]) / hbar;
    return out;
}

std::vector<FluxPoint> frequency_vs_flux(const SquidParams& p, std::span<const double> phi_grid,
                                         const SolverOptions& opts) {
    SolverOptions two_levels = opts;
    two_levels.n_states = 2;
    std::vector<FluxPoint> out(phi_grid.size());
    parallel_for(phi_grid.size(), [&](std::size_t i) {
        SquidParams at = p;
        at.phi_d = phi_grid[i];
        out[i] = {phi_grid[i], solve_levels(at, two_levels).omega_q};
    });
    return out;
}

Couplings circuit_couplings(const SquidParams& p, const SquidSpectrum& spectrum) {
    if (spectrum.mu.rows() < 2) throw ValidationError("circuit_couplings: spectrum needs at least 2 states");
    Couplings c;
    c.mu01 = spectrum.mu(0, 1);
    // phi~ in units of Phi0, so the Phi0 of the flux cancels the 1/Phi0 prefactor
    c.g_a = two_pi * spectrum.U1 * p.phi_a_tilde * c.mu01 / hbar;
    c.g_b = two_pi * spectrum.U1 * p.phi_b_tilde * c.mu01 / hbar;
    return c;
}

} // namespace qbsim::squid
