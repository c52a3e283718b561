#include "doctest.h"

#include "oracles.hpp"
#include "qbsim/constants.hpp"
#include "qbsim/errors.hpp"
#include "qbsim/readout.hpp"

#include <cmath>

using namespace qbsim;
using namespace qbsim::readout;
using constants::two_pi;

namespace {

ReadoutParams probe_point() {
    ReadoutParams p;
    p.omega_q = two_pi * 4.5e9;
    p.omega_a = two_pi * 5e9;
    p.g_a = 1e7;
    p.line_rate = 3e4;
    return p;
}

} // namespace

TEST_CASE("line shape at the dressed resonance") {
    const auto p = probe_point();
    for (double n : {0.0, 8.66, 64.0}) {
        const double dip = dip_frequency(n, p);
        CHECK(transmission(dip, n, p) < 1e-15);
        CHECK(std::abs(dressed_detuning(dip, n, p)) < 1e-6 * p.line_rate);
    }
    // exact half transmission at D = +-Gamma, independent of the frequency offset
    ReadoutParams unit;
    unit.omega_q = 0.0;
    unit.omega_a = -1.0;
    unit.g_a = 0.0;
    unit.line_rate = 0.25;
    CHECK(transmission(0.25, 0.0, unit) == 0.5);
    CHECK(transmission(-0.25, 0.0, unit) == 0.5);
    CHECK(transmission(0.0, 0.0, unit) == 0.0);
    CHECK(std::abs(transmission_amplitude(0.25, 0.0, unit)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(transmission(1e9, 0.0, unit) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("amplitude and power transmission agree") {
    const auto p = probe_point();
    for (double off : {-1e5, -3e4, -1.0, 0.0, 2e3, 5e5}) {
        const double w = dip_frequency(23.54, p) + off;
        CHECK(std::norm(transmission_amplitude(w, 23.54, p)) ==
              doctest::Approx(transmission(w, 23.54, p)).epsilon(1e-12).scale(1e-300));
    }
}

TEST_CASE("full width at half depth is 2 Gamma") {
    const auto p = probe_point();
    const double dip = dip_frequency(10.0, p);
    CHECK(transmission(dip + p.line_rate, 10.0, p) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(transmission(dip - p.line_rate, 10.0, p) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("dip is affine in the photon number") {
    const auto p = probe_point();
    std::vector<double> n, dip;
    for (int i = 0; i <= 64; ++i) {
        n.push_back(i);
        dip.push_back(dip_frequency(i, p) - p.omega_q);
    }
    const auto fit = oracle::fit_line(n, dip);
    const double slope = p.g_a * p.g_a / p.delta_a();
    CHECK(fit.slope == doctest::Approx(slope).epsilon(1e-10));
    CHECK(fit.slope == doctest::Approx(-3.183e4).epsilon(1e-3));
    CHECK(fit.max_residual < 1e-10 * std::abs(dip.back()));
}

TEST_CASE("dip ordering for the aged photon numbers") {
    const auto p = probe_point();
    const double ns[] = {64.0, 64.0 * std::exp(-1.0), 64.0 * std::exp(-2.0), 0.0};
    for (int i = 1; i < 4; ++i) CHECK(dip_frequency(ns[i - 1], p) < dip_frequency(ns[i], p));
    // with Delta_a > 0 the order flips
    auto above = p;
    above.omega_a = two_pi * 4e9;
    for (int i = 1; i < 4; ++i) CHECK(dip_frequency(ns[i - 1], above) > dip_frequency(ns[i], above));
}

TEST_CASE("photon-number inference round trips") {
    const auto p = probe_point();
    const auto grid = linear_grid(p.omega_q - 2.4e6, p.omega_q + 0.3e6, 501);  // spacing 5.4e3 < Gamma / 5
    CHECK(grid[1] - grid[0] < p.line_rate / 5);
    for (double n : {64.0, 23.54, 8.66, 3.2, 0.0}) {
        const auto s = spectrum_sweep(grid, n, p);
        CHECK(s.diagnostics.empty());
        const auto est = infer_photon_number(s, p);
        if (n > 0.0) CHECK(est.n_bar == doctest::Approx(n).epsilon(0.005));
        else CHECK(est.n_bar < 1e-6);
        CHECK(est.dip_frequency == doctest::Approx(dip_frequency(n, p)).epsilon(1e-12));
    }
}

TEST_CASE("inference refuses a dip outside the window") {
    const auto p = probe_point();
    const auto grid = linear_grid(p.omega_q - 1e6, p.omega_q + 0.3e6, 201);
    const auto s = spectrum_sweep(grid, 64.0, p);
    CHECK_FALSE(s.diagnostics.empty());
    CHECK_THROWS_AS(infer_photon_number(s, p), ValidationError);
}

TEST_CASE("parameter validation") {
    auto p = probe_point();
    p.line_rate = 0.0;
    CHECK_THROWS_AS(transmission(0.0, 1.0, p), ValidationError);
    p = probe_point();
    p.omega_q = p.omega_a;
    CHECK_THROWS_AS(dip_frequency(1.0, p), ValidationError);
    CHECK_THROWS_AS(transmission(0.0, -1.0, probe_point()), ValidationError);
    CHECK_THROWS_AS(linear_grid(0.0, 1.0, 1), ValidationError);
}

TEST_CASE("line shape in the dressed detuning") {
    CHECK(line_shape(0.0, 3e4) == 0.0);
    CHECK(line_shape(3e4, 3e4) == 0.5);
    CHECK(line_shape(-3e4, 3e4) == 0.5);
    CHECK(line_shape(1e12, 3e4) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(line_shape(6e4, 3e4) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK_THROWS_AS(line_shape(1.0, 0.0), ValidationError);
    const auto p = probe_point();
    const double w = dip_frequency(8.66, p) + 1234.5;
    CHECK(transmission(w, 8.66, p) == line_shape(dressed_detuning(w, 8.66, p), p.line_rate));
}
