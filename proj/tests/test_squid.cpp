#include "doctest.h"

#include "qbsim/constants.hpp"
#include "qbsim/dispersive.hpp"
#include "qbsim/errors.hpp"
#include "qbsim/squid.hpp"

#include <cmath>
#include <vector>

using namespace qbsim;
using namespace qbsim::squid;
using constants::two_pi;

namespace {

SquidParams circuit(double phi_d = 1.977) {
    SquidParams p;
    p.critical_current = 0.9794e-6;
    p.capacitance = 3.663e-12;
    p.phi_d = phi_d;
    p.phi_a_tilde = 1e-3;
    p.phi_b_tilde = 2e-3;
    return p;
}

} // namespace

TEST_CASE("Josephson energy") {
    CHECK(josephson_energy(0.9794e-6) == doctest::Approx(3.223e-22).epsilon(1e-3));
    CHECK(josephson_energy(2 * 0.9794e-6) == doctest::Approx(2 * josephson_energy(0.9794e-6)).epsilon(1e-15));
    CHECK_THROWS_AS(josephson_energy(0.0), ValidationError);
}

TEST_CASE("potential coefficients") {
    const double ej = josephson_energy(0.9794e-6);
    auto at = [](double phi) { return potential_coefficients(circuit(phi)); };
    CHECK(at(0.0).U0 == doctest::Approx(2 * ej).epsilon(1e-15));
    CHECK(at(0.0).U1 == 0.0);
    CHECK(std::abs(at(0.25).U0) < 1e-15 * ej);
    CHECK(at(0.25).U1 == doctest::Approx(2 * ej).epsilon(1e-15));
    CHECK(at(1.977).U0 == doctest::Approx(6.379e-22).epsilon(1e-3));
    for (double phi : {0.1, 1.977, 1.992, -0.3}) {
        const auto c = at(phi);
        CHECK(c.U0 * c.U0 + c.U1 * c.U1 == doctest::Approx(4 * ej * ej).epsilon(1e-14));
    }

    SquidParams shifted = circuit();
    shifted.convention = FluxConvention::bias_plus_zero_point;
    CHECK(shifted.potential_flux() == doctest::Approx(1.980).epsilon(1e-15));
}

TEST_CASE("parameter validation") {
    SquidParams p = circuit();
    p.capacitance = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = circuit();
    p.critical_current = -1.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = circuit();
    CHECK(p.validate().empty());
    p.phi_a_tilde = 0.06;
    CHECK(p.validate().size() == 1);
}

TEST_CASE("levels at the switch-off bias") {
    const auto spec = solve_levels(circuit());
    REQUIRE(spec.energies.size() == 4);
    CHECK(spec.omega_q == doctest::Approx(two_pi * 4.5e9).epsilon(0.02));
    for (std::size_t k = 0; k + 1 < 4; ++k) {
        const double spacing = spec.energies[k + 1] - spec.energies[k];
        CHECK(spacing == doctest::Approx(2.99e-24).epsilon(0.03));
    }
    // weak negative anharmonicity
    CHECK(spec.energies[2] - spec.energies[1] < spec.energies[1] - spec.energies[0]);
    CHECK(spec.energies[3] - spec.energies[2] < spec.energies[2] - spec.energies[1]);

    CHECK(spec.omega_q == doctest::Approx(plasma_frequency(circuit())).epsilon(0.05));
    CHECK(plasma_frequency(circuit()) == doctest::Approx(two_pi * 4.51e9).epsilon(0.005));

    // variational bound and the quoted ground energy
    CHECK(spec.energies[0] >= -spec.U0);
    CHECK(spec.energies[0] == doctest::Approx(-6.3814e-22).epsilon(0.02));
    CHECK(spec.n_bound > 50);
}

TEST_CASE("grid doubling converges below 1e-6") {
    SolverOptions coarse;
    SolverOptions fine;
    fine.grid_size = 2 * coarse.grid_size;
    const auto a = solve_levels(circuit(), coarse);
    const auto b = solve_levels(circuit(), fine);
    for (std::size_t k = 0; k < 2; ++k)
        CHECK(std::abs(a.energies[k] - b.energies[k]) / std::abs(b.energies[k]) < 1e-6);
}

TEST_CASE("wavefunctions are orthonormal and mu is a bounded symmetric matrix") {
    const auto spec = solve_levels(circuit());
    const double h = spec.grid[1] - spec.grid[0];
    const Eigen::MatrixXd overlap = h * spec.wavefunctions * spec.wavefunctions.transpose();
    CHECK((overlap - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((spec.mu - spec.mu.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(spec.mu.cwiseAbs().maxCoeff() <= 1.0);
    CHECK(spec.mu(0, 0) > 0.99);
    for (std::size_t k = 0; k + 1 < 4; ++k) CHECK(spec.energies[k] < spec.energies[k + 1]);
}

TEST_CASE("parity: mu01 vanishes in the symmetric well") {
    const auto spec = solve_levels(circuit());
    CHECK(std::abs(spec.mu(0, 1)) < 1e-8);
    CHECK(std::abs(spec.mu(1, 2)) < 1e-8);
    CHECK(std::abs(spec.mu(0, 2)) > 1e-4);  // same parity couples
}

TEST_CASE("Dirichlet window agrees with the periodic ring") {
    SolverOptions wall;
    wall.boundary = Boundary::dirichlet;
    const auto ring = solve_levels(circuit());
    const auto box = solve_levels(circuit(), wall);
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(std::abs(ring.energies[k] - box.energies[k]) / std::abs(ring.energies[k]) < 1e-4);

    wall.window_half_width = 4.0;
    CHECK_THROWS_AS(solve_levels(circuit(), wall), ValidationError);
}

TEST_CASE("too few bound states") {
    // near phi_d = 0.25 the well vanishes
    CHECK_THROWS_AS(solve_levels(circuit(0.25 - 1e-7)), ValidationError);
    SolverOptions lenient;
    lenient.require_bound = false;
    const auto spec = solve_levels(circuit(0.25 - 1e-7), lenient);
    CHECK_FALSE(spec.diagnostics.empty());
    CHECK(spec.n_bound < 4);

    SolverOptions small;
    small.grid_size = 256;
    CHECK_THROWS_AS(solve_levels(circuit(), small), ValidationError);
}

TEST_CASE("flux sweep symmetry and monotone branch") {
    const std::vector<double> phi{1.977, -1.977, 0.977, 2.977};
    const auto curve = frequency_vs_flux(circuit(), phi);
    for (std::size_t i = 1; i < curve.size(); ++i)
        CHECK(curve[i].omega_q == doctest::Approx(curve[0].omega_q).epsilon(1e-9));

    std::vector<double> branch;
    for (int i = 0; i <= 15; ++i) branch.push_back(1.977 + 0.001 * i);
    const auto b = frequency_vs_flux(circuit(), branch);
    for (std::size_t i = 1; i < b.size(); ++i) CHECK(b[i].omega_q > b[i - 1].omega_q);
}

TEST_CASE("circuit couplings") {
    const auto spec = solve_levels(circuit(1.992));
    SquidParams p = circuit(1.992);
    const auto c = circuit_couplings(p, spec);
    CHECK(c.mu01 == spec.mu(0, 1));
    CHECK(c.g_a * p.phi_b_tilde == doctest::Approx(c.g_b * p.phi_a_tilde).epsilon(1e-12).scale(1e-300));
    p.phi_a_tilde = 0.0;
    CHECK(circuit_couplings(p, spec).g_a == 0.0);

    // reported, not asserted: the operating-point coupling against the quoted 1.52 MHz
    dispersive::CircuitParams cp;
    cp.omega_a = two_pi * 5e9;
    cp.omega_b = two_pi * 4e9;
    cp.omega_q = spec.omega_q;
    cp.g_a = c.g_a;
    cp.g_b = c.g_b;
    cp.gamma = 1e4;
    const auto d = dispersive::dispersive_map(cp);
    MESSAGE("phi_d = 1.992: omega_q/2pi = " << spec.omega_q / two_pi << " Hz, mu01 = " << c.mu01
                                            << ", g_a/|Delta_a| = " << d.ratio_a << ", g_b/|Delta_b| = " << d.ratio_b
                                            << ", lambda_ab = " << d.lambda_ab << " rad/s (quoted 1.52 MHz)");
}
