#include "doctest.h"

#include "oracles.hpp"
#include "qbsim/constants.hpp"
#include "qbsim/errors.hpp"
#include "qbsim/ergotropy.hpp"

#include <cmath>
#include <random>

using namespace qbsim;
using ergotropy::battery_hamiltonian;
using ergotropy::Convention;
using ergotropy::passive_energy;
using ergotropy::passive_state;
using ergotropy::ratio_vs_beta;
using ergotropy::ergotropy_vs_time;
using constants::hbar;

namespace {

constexpr double omega_a = constants::two_pi * 5e9;
const double quantum = hbar * omega_a;

double dephased_ratio_oracle(double mean) {
    const auto p = oracle::poisson(mean, oracle::poisson_cutoff(mean));
    const double charged = oracle::mean_quanta(p);
    return (charged - oracle::passive_quanta(p)) / charged;
}

} // namespace

TEST_CASE("sorted-Poisson oracle values") {
    // frozen from the brute-force oracle
    const double mean = 63.92922477836962;
    const auto p = oracle::poisson(mean, oracle::poisson_cutoff(mean));
    CHECK(oracle::passive_quanta(p) == doctest::Approx(12.25).epsilon(1e-3));
    CHECK(oracle::mean_quanta(p) - oracle::passive_quanta(p) == doctest::Approx(51.68).epsilon(1e-3));
    CHECK(dephased_ratio_oracle(64.0) == doctest::Approx(0.8084909726617897).epsilon(1e-12));
    CHECK(dephased_ratio_oracle(213.16) == doctest::Approx(0.8930727118851058).epsilon(1e-12));
}

TEST_CASE("dephased ergotropy of the charged battery") {
    const double mean = 63.92922477836962;
    const FockSpace s = FockSpace::for_coherent_amplitude(std::sqrt(mean));
    const auto cs = coherent_state(s, complex(0.0, std::sqrt(mean)));
    const auto h = battery_hamiltonian(s, omega_a);

    const auto from_ket = ergotropy::ergotropy(cs.ket, h, Convention::dephased);
    const auto p = oracle::poisson(mean, s.dim());
    CHECK(from_ket.charged_energy / quantum == doctest::Approx(oracle::mean_quanta(p)).epsilon(1e-10));
    CHECK(from_ket.passive_energy / quantum == doctest::Approx(oracle::passive_quanta(p)).epsilon(1e-10));
    CHECK(from_ket.ergotropy / quantum == doctest::Approx(51.73).epsilon(0.02));

    const auto from_rho = ergotropy::ergotropy(dm_from_ket(cs.ket), h, Convention::dephased);
    CHECK(from_rho.ergotropy == doctest::Approx(from_ket.ergotropy).epsilon(1e-12));
    CHECK(from_rho.convention == Convention::dephased);
}

TEST_CASE("coherent convention: a pure state is fully extractable") {
    const FockSpace s(128);
    const auto h = battery_hamiltonian(s, omega_a);
    for (double a : {0.5, 2.0, 8.0}) {
        const auto cs = coherent_state(s, a, Normalization::strict);
        const auto from_ket = ergotropy::ergotropy(cs.ket, h, Convention::coherent);
        CHECK(from_ket.ratio == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(from_ket.passive_energy == 0.0);
        const auto from_rho = ergotropy::ergotropy(dm_from_ket(cs.ket), h, Convention::coherent);
        CHECK(from_rho.ergotropy == doctest::Approx(from_ket.ergotropy).epsilon(1e-9));
    }
}

TEST_CASE("fixed points and single excitations") {
    const FockSpace s(6);
    const auto h = battery_hamiltonian(s, omega_a);
    const auto vac = dm_from_ket(Ket::basis(s, 0));
    for (auto c : {Convention::coherent, Convention::dephased}) {
        const auto r = ergotropy::ergotropy(vac, h, c);
        CHECK(r.charged_energy == 0.0);
        CHECK(r.ergotropy == 0.0);
        CHECK(r.ratio == 0.0);
        const auto one = ergotropy::ergotropy(dm_from_ket(Ket::basis(s, 1)), h, c);
        CHECK(one.ergotropy == doctest::Approx(quantum).epsilon(1e-14));
        CHECK(one.ratio == doctest::Approx(1.0).epsilon(1e-14));
    }
    const auto sigma = passive_state(dm_from_ket(Ket::basis(s, 3)), h);
    CHECK((sigma.matrix() - vac.matrix()).norm() < 1e-14);

    // thermal-like populations already decreasing: the state is passive
    Matrix diag = Matrix::Zero(6, 6);
    const double w[] = {0.4, 0.25, 0.15, 0.1, 0.06, 0.04};
    for (int i = 0; i < 6; ++i) diag(i, i) = w[i];
    const auto thermal = DensityMatrix::from_matrix(s, diag);
    CHECK(ergotropy::ergotropy(thermal, h, Convention::coherent).ergotropy == doctest::Approx(0.0).scale(quantum * 1e-12));
    CHECK((passive_state(thermal, h).matrix() - thermal.matrix()).norm() < 1e-14);
}

TEST_CASE("passive state: idempotent, diagonal, same spectrum") {
    const FockSpace s(24);
    const auto h = battery_hamiltonian(s, omega_a);
    std::mt19937 rng(9);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 10; ++trial) {
        const auto cs = coherent_state(s, complex(1.5 * normal(rng), 1.5 * normal(rng)), Normalization::strict);
        const auto rho = dephase(dm_from_ket(cs.ket));
        const auto sigma = passive_state(rho, h);
        CHECK(Operator(s, sigma.matrix()).is_diagonal());
        const auto again = passive_state(sigma, h);
        CHECK((again.matrix() - sigma.matrix()).norm() < 1e-14);
        const auto pop = sigma.populations();
        for (std::size_t k = 1; k < pop.size(); ++k) REQUIRE(pop[k] <= pop[k - 1]);
        CHECK(ergotropy::ergotropy(sigma, h, Convention::coherent).ergotropy == doctest::Approx(0.0).scale(quantum * 1e-10));
    }
}

TEST_CASE("energy-basis phases leave the ergotropy unchanged") {
    const FockSpace s(32);
    const auto h = battery_hamiltonian(s, omega_a);
    const auto cs = coherent_state(s, complex(1.2, 0.7), Normalization::strict);
    const auto rho = dm_from_ket(cs.ket);
    Vector phases(32);
    for (int k = 0; k < 32; ++k) phases(k) = std::polar(1.0, 0.37 * k * k);
    const Matrix u = phases.asDiagonal();
    const auto rotated = DensityMatrix::from_matrix(s, u * rho.matrix() * u.adjoint());
    for (auto c : {Convention::coherent, Convention::dephased})
        CHECK(ergotropy::ergotropy(rotated, h, c).ergotropy == doctest::Approx(ergotropy::ergotropy(rho, h, c).ergotropy).epsilon(1e-10));
}

TEST_CASE("passive_energy on raw spans") {
    const std::vector<double> p{0.1, 0.6, 0.3};
    const std::vector<double> e{2.0, 0.0, 1.0};
    CHECK(passive_energy(p, e) == doctest::Approx(0.3 * 1.0 + 0.1 * 2.0));
    const std::vector<double> short_e{0.0, 1.0};
    CHECK_THROWS_AS(passive_energy(p, short_e), DimensionMismatch);
}

TEST_CASE("dimension and hermiticity errors") {
    const auto h = battery_hamiltonian(FockSpace(8), omega_a);
    CHECK_THROWS_AS(ergotropy::ergotropy(dm_from_ket(Ket::basis(FockSpace(6), 0)), h, Convention::coherent), DimensionMismatch);
    Matrix skew = Matrix::Zero(8, 8);
    skew(0, 1) = 1.0;
    CHECK_THROWS_AS(ergotropy::ergotropy(dm_from_ket(Ket::basis(FockSpace(8), 0)), Operator(FockSpace(8), skew),
                              Convention::coherent),
                    ValidationError);
}

TEST_CASE("steady-state ratio against |beta|") {
    std::vector<double> beta;
    for (int i = 0; i <= 29; ++i) beta.push_back(0.05 + 0.05 * i);
    const auto curve = ratio_vs_beta(beta, 1e5, 1e4, omega_a);
    for (std::size_t i = 0; i < curve.size(); ++i) {
        CHECK(curve[i].ratio_coherent == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(curve[i].mean_photons == doctest::Approx(400.0 * beta[i] * beta[i]).epsilon(1e-12));
        if (i > 0) CHECK(curve[i].ratio_dephased >= curve[i - 1].ratio_dephased);
    }

    const std::vector<double> golden{0.01, 0.4, 0.73};
    const auto g = ratio_vs_beta(golden, 1e5, 1e4, omega_a);
    CHECK(g[0].ratio_dephased == 0.0);  // <n> = 0.04: vacuum stays the most populated level
    CHECK(g[1].ratio_dephased == doctest::Approx(0.8084909726617897).epsilon(1e-10));
    CHECK(g[2].ratio_dephased == doctest::Approx(0.8930727118851058).epsilon(1e-10));
    CHECK(g[2].ratio_dephased >= 0.85);

    for (double b : {0.2, 0.9, 1.5})
        CHECK(ratio_vs_beta(std::vector<double>{b}, 1e5, 1e4, omega_a)[0].ratio_dephased ==
              doctest::Approx(dephased_ratio_oracle(400.0 * b * b)).epsilon(1e-10));

    const std::vector<double> bad{0.0};
    CHECK_THROWS_AS(ratio_vs_beta(bad, 1e5, 1e4, omega_a), ValidationError);
}

TEST_CASE("ergotropy along the charging curve") {
    const dynamics::ChargingDrive drive{1e5, 0.4, 0.0};
    const double gamma = 1e4;
    std::vector<double> t;
    for (int i = 0; i <= 60; ++i) t.push_back(0.25 * i / gamma);
    const auto dephased = ergotropy_vs_time(drive, gamma, omega_a, t, Convention::dephased);
    const auto coherent = ergotropy_vs_time(drive, gamma, omega_a, t, Convention::coherent);
    CHECK(dephased.front().ergotropy == 0.0);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double n = dynamics::analytic_mean_photons(t[i], drive, gamma);
        CHECK(coherent[i].charged_energy == doctest::Approx(quantum * n).epsilon(1e-9).scale(1e-40));
        CHECK(dephased[i].ergotropy <= coherent[i].ergotropy * (1 + 1e-12));
        if (i > 0) CHECK(dephased[i].ergotropy >= dephased[i - 1].ergotropy);
    }
    CHECK(dephased.back().ergotropy / quantum == doctest::Approx(51.73).epsilon(0.02));
}
