// hilbert.hpp: truncated Fock space: ladder operators, kets, density matrices
//
// Everything here is a value type. Operators and states remember the Fock
// dimension they were built against and refuse to mix with other dimensions.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace qbsim {

using complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

class FockSpace {
public:
    explicit FockSpace(std::size_t dim);

    std::size_t dim() const noexcept { return dim_; }
    bool operator==(const FockSpace&) const = default;

    // ceil(|alpha|^2 + 6|alpha| + 10), rounded up to a multiple of 16.
    static FockSpace for_coherent_amplitude(double abs_alpha);
    static std::size_t recommended_dim(double abs_alpha);

private:
    std::size_t dim_;
};

enum class Units { dimensionless, energy, angular_frequency };

class Operator {
public:
    Operator(FockSpace space, Matrix elements, Units units = Units::dimensionless);

    const FockSpace& space() const noexcept { return space_; }
    std::size_t dim() const noexcept { return space_.dim(); }
    const Matrix& matrix() const noexcept { return elements_; }
    Units units() const noexcept { return units_; }

    complex operator()(std::size_t row, std::size_t col) const { return elements_(row, col); }

    // Max elementwise |O - O^dagger|.
    double hermiticity_error() const;
    bool is_diagonal(double tol = 0.0) const;

    Operator adjoint() const;
    Operator scaled(complex factor, Units units) const;

private:
    FockSpace space_;
    Matrix elements_;
    Units units_;
};

Operator annihilation_op(FockSpace space);
Operator creation_op(FockSpace space);
Operator number_op(FockSpace space);

class Ket {
public:
    Ket(FockSpace space, Vector amplitudes);

    static Ket basis(FockSpace space, std::size_t n);

    const FockSpace& space() const noexcept { return space_; }
    std::size_t dim() const noexcept { return space_.dim(); }
    const Vector& amplitudes() const noexcept { return amplitudes_; }
    complex operator[](std::size_t n) const { return amplitudes_(static_cast<Eigen::Index>(n)); }

    double norm() const { return amplitudes_.norm(); }
    // |c_n|^2 for every Fock level.
    std::vector<double> populations() const;

private:
    FockSpace space_;
    Vector amplitudes_;
};

enum class Normalization {
    report,  // keep the truncated amplitudes and report the missing weight
    strict,  // renormalize the truncated amplitudes to unit norm
};

struct CoherentState {
    Ket ket;
    double truncation_deficit;  // 1 - sum_n |c_n|^2 before any renormalization
    bool truncation_adequate;   // dim >= |alpha|^2 + 6|alpha| + 10
};

// c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!), built by the running recurrence
// c_{n+1} = c_n alpha / sqrt(n+1).
CoherentState coherent_state(FockSpace space, complex alpha,
                             Normalization mode = Normalization::report);

struct DensityTolerances {
    double hermiticity = 1e-9;
    double trace = 1e-8;
    double positivity = 1e-8;
};

struct DensityCheck {
    double hermiticity_error = 0.0;
    double trace_error = 0.0;
    double min_eigenvalue = 0.0;
    bool ok = true;
    std::string describe() const;
};

class DensityMatrix {
public:
    // Validates the matrix against `tol`; throws InvariantViolation on failure.
    static DensityMatrix from_matrix(FockSpace space, Matrix elements,
                                     const DensityTolerances& tol = {});
    // No validation. For library internals that already guarantee the invariants
    // (or deliberately carry a truncation deficit).
    static DensityMatrix unchecked(FockSpace space, Matrix elements);

    const FockSpace& space() const noexcept { return space_; }
    std::size_t dim() const noexcept { return space_.dim(); }
    const Matrix& matrix() const noexcept { return elements_; }
    complex operator()(std::size_t row, std::size_t col) const { return elements_(row, col); }

    complex trace() const { return elements_.trace(); }
    double purity() const;
    std::vector<double> populations() const;
    DensityCheck check(const DensityTolerances& tol = {}) const;

private:
    DensityMatrix(FockSpace space, Matrix elements);

    FockSpace space_;
    Matrix elements_;
};

DensityMatrix dm_from_ket(const Ket& state);

// Zero every Fock-basis coherence, keep the populations.
DensityMatrix dephase(const DensityMatrix& rho);

complex expectation(const Operator& op, const DensityMatrix& rho);
complex expectation(const Operator& op, const Ket& state);

// Expectation of a Hermitian operator. Throws InvariantViolation when the
// imaginary part exceeds 1e-9 relative to max(|Re|, max_ij |O_ij|).
double real_expectation(const Operator& op, const DensityMatrix& rho);
double real_expectation(const Operator& op, const Ket& state);

} // namespace qbsim
