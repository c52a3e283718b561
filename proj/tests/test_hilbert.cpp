#include "doctest.h"

#include "oracles.hpp"
#include "qbsim/constants.hpp"
#include "qbsim/errors.hpp"
#include "qbsim/hilbert.hpp"

#include <cmath>
#include <random>

using namespace qbsim;

TEST_CASE("fock space rejects dim below 2") {
    CHECK_THROWS_AS(FockSpace(1), ValidationError);
    CHECK_THROWS_AS(FockSpace(0), ValidationError);
    CHECK(FockSpace(2).dim() == 2);
}

TEST_CASE("recommended dim rounds |a|^2 + 6|a| + 10 up to a multiple of 16") {
    CHECK(FockSpace::recommended_dim(0.0) == 16);
    CHECK(FockSpace::recommended_dim(8.0) == 128);  // 64 + 48 + 10 = 122
    CHECK(FockSpace::recommended_dim(30.0) == 1104);  // 900 + 180 + 10 = 1090
    CHECK_THROWS_AS(FockSpace::recommended_dim(std::nan("")), ValidationError);
}

TEST_CASE("ladder operators at dim 3") {
    const FockSpace s(3);
    const auto a = annihilation_op(s);
    CHECK(a(0, 1) == complex(1.0, 0.0));
    CHECK(a(1, 2) == complex(std::sqrt(2.0), 0.0));
    int nonzero = 0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            if (a(i, j) != complex(0.0, 0.0)) ++nonzero;
    CHECK(nonzero == 2);

    CHECK((creation_op(s).matrix() - a.matrix().adjoint()).norm() == 0.0);
    const auto n = number_op(s);
    CHECK(n.is_diagonal());
    for (std::size_t k = 0; k < 3; ++k) CHECK(n(k, k).real() == static_cast<double>(k));
}

TEST_CASE("ladder matrix elements are exactly sqrt(n)") {
    const FockSpace s(40);
    const auto a = annihilation_op(s);
    for (std::size_t m = 0; m < 40; ++m)
        for (std::size_t n = 0; n < 40; ++n) {
            const complex expected = (m + 1 == n) ? complex(std::sqrt(static_cast<double>(n)), 0.0) : complex(0.0, 0.0);
            REQUIRE(a(m, n) == expected);
        }
}

TEST_CASE("vacuum is annihilated") {
    const FockSpace s(8);
    const Vector out = annihilation_op(s).matrix() * Ket::basis(s, 0).amplitudes();
    CHECK(out.norm() == 0.0);
}

TEST_CASE("canonical commutator away from the truncation edge") {
    const FockSpace s(24);
    const Matrix a = annihilation_op(s).matrix();
    const Matrix comm = a * a.adjoint() - a.adjoint() * a;
    const Matrix id = Matrix::Identity(23, 23);
    CHECK((comm.topLeftCorner(23, 23) - id).cwiseAbs().maxCoeff() < 1e-12);
    // the last level sees the truncation
    CHECK(std::abs(comm(23, 23) - complex(1.0, 0.0)) > 1.0);
}

TEST_CASE("coherent state of zero amplitude is the vacuum") {
    const auto cs = coherent_state(FockSpace(16), 0.0);
    CHECK(cs.ket[0] == complex(1.0, 0.0));
    for (std::size_t n = 1; n < 16; ++n) CHECK(cs.ket[n] == complex(0.0, 0.0));
    CHECK(cs.truncation_deficit == 0.0);
}

TEST_CASE("coherent state rejects non-finite amplitude") {
    CHECK_THROWS_AS(coherent_state(FockSpace(16), complex(INFINITY, 0.0)), ValidationError);
    CHECK_THROWS_AS(coherent_state(FockSpace(16), complex(0.0, std::nan(""))), ValidationError);
}

TEST_CASE("coherent amplitudes agree with the lgamma closed form") {
    const double mean = 63.92922477836962;
    const auto cs = coherent_state(FockSpace::for_coherent_amplitude(std::sqrt(mean)), std::sqrt(mean));
    const auto p = oracle::poisson(mean, cs.ket.dim());
    for (std::size_t n = 0; n < p.size(); ++n) CHECK(std::norm(cs.ket[n]) == doctest::Approx(p[n]).epsilon(1e-11));
}

TEST_CASE("recurrence survives n ~ 300 without factorial overflow") {
    const double alpha = 16.0;  // |alpha|^2 = 256
    const auto cs = coherent_state(FockSpace(512), alpha);
    CHECK(cs.truncation_deficit < 1e-12);
    CHECK(std::isfinite(cs.ket[300].real()));
    const auto p = oracle::poisson(256.0, 512);
    CHECK(std::norm(cs.ket[300]) == doctest::Approx(p[300]).epsilon(1e-10));
}

TEST_CASE("largest amplitudes at the charging endpoint") {
    // <n> at gamma t = 15 with lambda = 0.1, |beta| = 0.4, gamma = 0.01
    const double mean = 64.0 * std::pow(-std::expm1(-7.5), 2);
    const auto cs = coherent_state(FockSpace::for_coherent_amplitude(std::sqrt(mean)), std::sqrt(mean));
    std::vector<double> c;
    for (std::size_t n = 0; n < cs.ket.dim(); ++n) c.push_back(cs.ket[n].real());
    std::sort(c.begin(), c.end(), std::greater<>());
    CHECK(c[0] == doctest::Approx(0.2234).epsilon(1e-3 / 0.2234));
    CHECK(c[1] == doctest::Approx(0.2231).epsilon(1e-3 / 0.2231));
    CHECK(c[2] == doctest::Approx(0.2219).epsilon(1e-3 / 0.2219));
    CHECK(c[3] == doctest::Approx(0.2212).epsilon(1e-3 / 0.2212));
    // the largest amplitude sits at the Poisson mode, floor(63.93) = 63
    std::size_t argmax = 0;
    for (std::size_t n = 1; n < cs.ket.dim(); ++n)
        if (std::abs(cs.ket[n]) > std::abs(cs.ket[argmax])) argmax = n;
    CHECK(argmax == 63);
}

TEST_CASE("aged amplitudes at gamma tau = 15") {
    const double mean = 64.0 * std::exp(-15.0);
    const auto cs = coherent_state(FockSpace(16), std::sqrt(mean));
    CHECK(cs.ket[1].real() == doctest::Approx(4.4e-3).epsilon(0.02));
    CHECK(cs.ket[2].real() == doctest::Approx(1.38e-5).epsilon(0.02));
}

TEST_CASE("coherent state is an eigenvector of a up to truncation") {
    const FockSpace s(128);
    const auto cs = coherent_state(s, 8.0);
    CHECK(cs.truncation_adequate);
    const Vector residual = annihilation_op(s).matrix() * cs.ket.amplitudes() - 8.0 * cs.ket.amplitudes();
    CHECK(residual.norm() < 1e-3);
}

TEST_CASE("truncation deficit is reported, strict mode renormalizes") {
    const FockSpace small(16);
    const auto report = coherent_state(small, 3.0);
    CHECK_FALSE(report.truncation_adequate);  // 9 + 18 + 10 = 37 > 16
    CHECK(report.truncation_deficit > 1e-3);
    CHECK(report.ket.norm() * report.ket.norm() == doctest::Approx(1.0 - report.truncation_deficit).epsilon(1e-12));

    const auto strict = coherent_state(small, 3.0, Normalization::strict);
    CHECK(strict.ket.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(strict.truncation_deficit == doctest::Approx(report.truncation_deficit));
}

TEST_CASE("expectations") {
    const FockSpace s(128);
    const auto n = number_op(s);
    CHECK(expectation(n, Ket::basis(s, 0)) == complex(0.0, 0.0));

    const complex alpha(3.0, -4.0);
    const auto cs = coherent_state(s, alpha);
    const double mean = real_expectation(n, cs.ket);
    CHECK(std::abs(mean - 25.0) <= 25.0 * cs.truncation_deficit + 1e-10);
    CHECK(real_expectation(n, dm_from_ket(cs.ket)) == doctest::Approx(mean).epsilon(1e-12));

    // hbar omega_a <n> at <n> = 64, omega_a = 2 pi x 5 GHz
    const double omega_a = constants::two_pi * 5e9;
    const auto full = coherent_state(s, 8.0);
    const double energy = constants::hbar * omega_a * real_expectation(n, full.ket);
    CHECK(energy == doctest::Approx(2.12e-22).epsilon(0.005));

    CHECK_THROWS_AS(expectation(number_op(FockSpace(4)), Ket::basis(s, 0)), DimensionMismatch);
}

TEST_CASE("real_expectation reports a non-Hermitian imaginary part") {
    const FockSpace s(4);
    const Operator a = annihilation_op(s);
    const auto cs = coherent_state(s, complex(0.0, 0.5), Normalization::strict);
    CHECK_THROWS_AS(real_expectation(a, cs.ket), InvariantViolation);
}

TEST_CASE("density matrix constructors satisfy the invariants") {
    const FockSpace s(64);
    std::mt19937 rng(7);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 20; ++trial) {
        const complex alpha(2.0 * normal(rng), 2.0 * normal(rng));
        const auto cs = coherent_state(s, alpha, Normalization::strict);
        const auto rho = dm_from_ket(cs.ket);
        const auto report = rho.check();
        CHECK(report.ok);
        CHECK(rho.purity() == doctest::Approx(1.0).epsilon(1e-10));
        const auto d = dephase(rho);
        CHECK(d.check().ok);
        CHECK(std::abs(d.trace() - rho.trace()) == 0.0);
        const auto n = number_op(s);
        CHECK(expectation(n, d).real() == expectation(n, rho).real());
    }
}

TEST_CASE("dm_from_ket of vacuum and dephasing of diagonal states") {
    const FockSpace s(5);
    const auto rho = dm_from_ket(Ket::basis(s, 0));
    CHECK(rho(0, 0) == complex(1.0, 0.0));
    CHECK(rho.matrix().cwiseAbs().sum() == 1.0);

    Matrix diag = Matrix::Zero(5, 5);
    diag(0, 0) = 0.5;
    diag(2, 2) = 0.3;
    diag(4, 4) = 0.2;
    const auto mixed = DensityMatrix::from_matrix(s, diag);
    CHECK((dephase(mixed).matrix() - mixed.matrix()).norm() == 0.0);
}

TEST_CASE("dephased coherent state is the Poisson mixture") {
    const FockSpace s(64);
    const auto cs = coherent_state(s, complex(2.0, 1.0), Normalization::report);
    const auto d = dephase(dm_from_ket(cs.ket));
    const auto p = oracle::poisson(5.0, 64);
    for (std::size_t n = 0; n < 64; ++n) {
        CHECK(d(n, n).real() == doctest::Approx(p[n]).epsilon(1e-11));
        for (std::size_t m = 0; m < 64; ++m)
            if (m != n) REQUIRE(d(n, m) == complex(0.0, 0.0));
    }
}

TEST_CASE("from_matrix rejects invalid density matrices") {
    const FockSpace s(2);
    Matrix bad_trace = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(DensityMatrix::from_matrix(s, bad_trace), InvariantViolation);
    Matrix negative(2, 2);
    negative << 1.2, 0.0, 0.0, -0.2;
    CHECK_THROWS_AS(DensityMatrix::from_matrix(s, negative), InvariantViolation);
    Matrix non_hermitian(2, 2);
    non_hermitian << 0.5, 0.1, 0.0, 0.5;
    CHECK_THROWS_AS(DensityMatrix::from_matrix(s, non_hermitian), InvariantViolation);
    CHECK_THROWS_AS(DensityMatrix::from_matrix(FockSpace(3), Matrix::Identity(2, 2)), DimensionMismatch);
}
