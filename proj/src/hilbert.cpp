#include "qbsim/hilbert.hpp"

#include "qbsim/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qbsim {

namespace {

void require_same(const char* where, const FockSpace& a, const FockSpace& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch(where, a.dim(), b.dim());
}

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

} // namespace

// ---------------------------------------------------------------- FockSpace

FockSpace::FockSpace(std::size_t dim) : dim_(dim) {
    if (dim < 2) throw ValidationError("FockSpace: dim must be >= 2, got " + std::to_string(dim));
}

std::size_t FockSpace::recommended_dim(double abs_alpha) {
    if (!std::isfinite(abs_alpha) || abs_alpha < 0.0)
        throw ValidationError("FockSpace: coherent amplitude must be finite and >= 0");
    const double needed = std::ceil(abs_alpha * abs_alpha + 6.0 * abs_alpha + 10.0);
    const auto n = static_cast<std::size_t>(needed);
    return ((n + 15) / 16) * 16;
}

FockSpace FockSpace::for_coherent_amplitude(double abs_alpha) {
    return FockSpace(recommended_dim(abs_alpha));
}

// ---------------------------------------------------------------- Operator

Operator::Operator(FockSpace space, Matrix elements, Units units)
    : space_(space), elements_(std::move(elements)), units_(units) {
    const auto d = static_cast<Eigen::Index>(space_.dim());
    if (elements_.rows() != d || elements_.cols() != d)
        throw DimensionMismatch("Operator", space_.dim(), static_cast<std::size_t>(elements_.rows()));
}

double Operator::hermiticity_error() const {
    return max_abs(elements_ - elements_.adjoint());
}

bool Operator::is_diagonal(double tol) const {
    for (Eigen::Index j = 0; j < elements_.cols(); ++j)
        for (Eigen::Index i = 0; i < elements_.rows(); ++i)
            if (i != j && std::abs(elements_(i, j)) > tol) return false;
    return true;
}

Operator Operator::adjoint() const {
    return Operator(space_, elements_.adjoint(), units_);
}

Operator Operator::scaled(complex factor, Units units) const {
    return Operator(space_, factor * elements_, units);
}

Operator annihilation_op(FockSpace space) {
    const auto d = static_cast<Eigen::Index>(space.dim());
    Matrix a = Matrix::Zero(d, d);
    for (Eigen::Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return Operator(space, std::move(a));
}

Operator creation_op(FockSpace space) {
    return annihilation_op(space).adjoint();
}

Operator number_op(FockSpace space) {
    const auto d = static_cast<Eigen::Index>(space.dim());
    Matrix n = Matrix::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
    return Operator(space, std::move(n));
}

// ---------------------------------------------------------------- Ket

Ket::Ket(FockSpace space, Vector amplitudes) : space_(space), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != static_cast<Eigen::Index>(space_.dim()))
        throw DimensionMismatch("Ket", space_.dim(), static_cast<std::size_t>(amplitudes_.size()));
}

Ket Ket::basis(FockSpace space, std::size_t n) {
    if (n >= space.dim())
        throw ValidationError("Ket::basis: level " + std::to_string(n) + " outside dim " +
                              std::to_string(space.dim()));
    Vector v = Vector::Zero(static_cast<Eigen::Index>(space.dim()));
    v(static_cast<Eigen::Index>(n)) = 1.0;
    return Ket(space, std::move(v));
}

std::vector<double> Ket::populations() const {
    std::vector<double> p(space_.dim());
    for (std::size_t n = 0; n < p.size(); ++n) p[n] = std::norm(amplitudes_(static_cast<Eigen::Index>(n)));
    return p;
}

CoherentState coherent_state(FockSpace space, complex alpha, Normalization mode) {
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
        throw ValidationError("coherent_state: alpha must be finite");

    const auto d = static_cast<Eigen::Index>(space.dim());
    const double abs_alpha = std::abs(alpha);
    Vector c(d);
    c(0) = std::exp(-0.5 * abs_alpha * abs_alpha);
    for (Eigen::Index n = 0; n + 1 < d; ++n)
        c(n + 1) = c(n) * alpha / std::sqrt(static_cast<double>(n + 1));

    const double weight = c.squaredNorm();
    const double deficit = std::max(0.0, 1.0 - weight);
    const bool adequate =
        static_cast<double>(space.dim()) >= abs_alpha * abs_alpha + 6.0 * abs_alpha + 10.0;
    if (mode == Normalization::strict) c /= std::sqrt(weight);
    return CoherentState{Ket(space, std::move(c)), deficit, adequate};
}

// ---------------------------------------------------------------- DensityMatrix

std::string DensityCheck::describe() const {
    std::ostringstream os;
    os << "hermiticity error " << hermiticity_error << ", trace error " << trace_error
       << ", min eigenvalue " << min_eigenvalue;
    return os.str();
}

DensityMatrix::DensityMatrix(FockSpace space, Matrix elements)
    : space_(space), elements_(std::move(elements)) {
    const auto d = static_cast<Eigen::Index>(space_.dim());
    if (elements_.rows() != d || elements_.cols() != d)
        throw DimensionMismatch("DensityMatrix", space_.dim(), static_cast<std::size_t>(elements_.rows()));
}

DensityMatrix DensityMatrix::unchecked(FockSpace space, Matrix elements) {
    return DensityMatrix(space, std::move(elements));
}

DensityMatrix DensityMatrix::from_matrix(FockSpace space, Matrix elements, const DensityTolerances& tol) {
    DensityMatrix rho(space, std::move(elements));
    const auto report = rho.check(tol);
    if (!report.ok) throw InvariantViolation("DensityMatrix: " + report.describe());
    return rho;
}

double DensityMatrix::purity() const {
    // Tr[rho^2] = sum_ij rho_ij rho_ji = sum_ij |rho_ij|^2 for Hermitian rho
    return (elements_.cwiseProduct(elements_.transpose())).sum().real();
}

std::vector<double> DensityMatrix::populations() const {
    std::vector<double> p(space_.dim());
    for (std::size_t n = 0; n < p.size(); ++n) {
        const auto k = static_cast<Eigen::Index>(n);
        p[n] = elements_(k, k).real();
    }
    return p;
}

DensityCheck DensityMatrix::check(const DensityTolerances& tol) const {
    DensityCheck r;
    r.hermiticity_error = max_abs(elements_ - elements_.adjoint());
    r.trace_error = std::abs(elements_.trace() - complex(1.0, 0.0));
    const Matrix herm = 0.5 * (elements_ + elements_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    r.ok = r.hermiticity_error <= tol.hermiticity && r.trace_error <= tol.trace &&
           r.min_eigenvalue >= -tol.positivity;
    return r;
}

DensityMatrix dm_from_ket(const Ket& state) {
    const Vector& v = state.amplitudes();
    return DensityMatrix::unchecked(state.space(), v * v.adjoint());
}

DensityMatrix dephase(const DensityMatrix& rho) {
    Matrix diag = rho.matrix().diagonal().asDiagonal();
    return DensityMatrix::unchecked(rho.space(), std::move(diag));
}

// ---------------------------------------------------------------- expectations

complex expectation(const Operator& op, const DensityMatrix& rho) {
    require_same("expectation", op.space(), rho.space());
    // Tr[rho O] without forming the product
    return rho.matrix().cwiseProduct(op.matrix().transpose()).sum();
}

complex expectation(const Operator& op, const Ket& state) {
    require_same("expectation", op.space(), state.space());
    const Vector& v = state.amplitudes();
    return v.dot(op.matrix() * v);
}

namespace {

double checked_real(const Operator& op, complex value) {
    const double scale = std::max(std::abs(value.real()), max_abs(op.matrix()));
    if (std::abs(value.imag()) > 1e-9 * scale) {
        std::ostringstream os;
        os << "expectation of a Hermitian operator has imaginary part " << value.imag()
           << " (real part " << value.real() << ")";
        throw InvariantViolation(os.str());
    }
    return value.real();
}

} // namespace

double real_expectation(const Operator& op, const DensityMatrix& rho) {
    return checked_real(op, expectation(op, rho));
}

double real_expectation(const Operator& op, const Ket& state) {
    return checked_real(op, expectation(op, state));
}

} // namespace qbsim
