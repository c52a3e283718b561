// ergotropy.hpp: passive states and extractable work of the cavity battery
//
// Two conventions are offered. `coherent` takes the state as given; a pure
// coherent state is then fully extractable. `dephased` first removes the
// Fock-basis coherences and is the accounting under which a charged coherent
// battery at <n> = 63.93 holds about 51.7 hbar omega_a of ergotropy.

#pragma once

#include "qbsim/dynamics.hpp"
#include "qbsim/hilbert.hpp"

#include <span>
#include <vector>

namespace qbsim::ergotropy {

enum class Convention { coherent, dephased };

const char* to_string(Convention c);

struct ErgotropyReport {
    double charged_energy = 0.0;  // Tr[rho H_B], J
    double passive_energy = 0.0;  // Tr[sigma_rho H_B], J
    double ergotropy = 0.0;       // charged - passive, J
    double ratio = 0.0;           // ergotropy / charged, 0 when nothing is charged
    Convention convention = Convention::coherent;
};

// Battery Hamiltonian hbar omega_a a^dagger a.
Operator battery_hamiltonian(FockSpace space, double omega_a);

// Eigenvalues of rho sorted descending, paired with energy eigenstates of H_B
// sorted ascending. Equal energies (within 1e-12 relative) keep the lower Fock
// index first, so the result does not depend on eigensolver ordering.
DensityMatrix passive_state(const DensityMatrix& rho, const Operator& battery);

ErgotropyReport ergotropy(const DensityMatrix& rho, const Operator& battery, Convention convention);
// Pure-state shortcut: the coherent convention needs no eigendecomposition of rho.
ErgotropyReport ergotropy(const Ket& state, const Operator& battery, Convention convention);

// Passive energy of a state diagonal in the eigenbasis of H_B:
// sum_k p_(k) eps_k with p sorted descending and eps ascending.
double passive_energy(std::span<const double> populations, std::span<const double> energies);

std::vector<ErgotropyReport> ergotropy_vs_time(const dynamics::ChargingDrive& drive, double gamma,
                                               double omega_a, std::span<const double> t_grid,
                                               Convention convention);

struct RatioPoint {
    double beta_mag = 0.0;
    double mean_photons = 0.0;
    double ratio_dephased = 0.0;
    double ratio_coherent = 0.0;
};

// Steady-state ergotropy/charged-energy ratio for each |beta|.
std::vector<RatioPoint> ratio_vs_beta(std::span<const double> beta_grid, double lambda_ab, double gamma,
                                      double omega_a);

} // namespace qbsim::ergotropy
