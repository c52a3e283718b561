#include "qbsim/ergotropy.hpp"

#include "qbsim/constants.hpp"
#include "qbsim/errors.hpp"
#include "qbsim/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qbsim::ergotropy {

const char* to_string(Convention c) {
    return c == Convention::coherent ? "coherent" : "dephased";
}

Operator battery_hamiltonian(FockSpace space, double omega_a) {
    return number_op(space).scaled(constants::hbar * omega_a, Units::energy);
}

namespace {

constexpr double tie_tolerance = 1e-12;

struct EnergyBasis {
    std::vector<double> energies;  // ascending
    Matrix vectors;                // columns match `energies`
    bool fock_diagonal = false;
};

// Indices of `values` sorted ascending; values equal within the tie tolerance
// are ordered by index.
std::vector<std::size_t> ascending_order(const std::vector<double>& values) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    const double tol = tie_tolerance * scale;
    for (std::size_t begin = 0; begin < idx.size();) {
        std::size_t end = begin + 1;
        while (end < idx.size() && values[idx[end]] - values[idx[end - 1]] <= tol) ++end;
        std::sort(idx.begin() + static_cast<std::ptrdiff_t>(begin), idx.begin() + static_cast<std::ptrdiff_t>(end));
        begin = end;
    }
    return idx;
}

void require_hermitian(const Operator& battery) {
    const double scale = battery.matrix().cwiseAbs().maxCoeff();
    if (battery.hermiticity_error() > 1e-9 * std::max(scale, 1e-300))
        throw ValidationError("ergotropy: battery Hamiltonian is not Hermitian");
}

void require_hermitian(const DensityMatrix& rho) {
    const double err = (rho.matrix() - rho.matrix().adjoint()).cwiseAbs().maxCoeff();
    if (err > 1e-9) throw ValidationError("ergotropy: density matrix is not Hermitian");
}

EnergyBasis energy_basis(const Operator& battery, bool need_vectors) {
    require_hermitian(battery);
    EnergyBasis basis;
    const auto d = static_cast<Eigen::Index>(battery.dim());
    const double scale = battery.matrix().cwiseAbs().maxCoeff();
    if (battery.is_diagonal(1e-14 * scale)) {
        std::vector<double> diag(battery.dim());
        for (Eigen::Index k = 0; k < d; ++k) diag[static_cast<std::size_t>(k)] = battery(k, k).real();
        const auto order = ascending_order(diag);
        basis.energies.resize(order.size());
        if (need_vectors) basis.vectors = Matrix::Zero(d, d);
        for (std::size_t k = 0; k < order.size(); ++k) {
            basis.energies[k] = diag[order[k]];
            if (need_vectors) basis.vectors(static_cast<Eigen::Index>(order[k]), static_cast<Eigen::Index>(k)) = 1.0;
        }
        basis.fock_diagonal = true;
        return basis;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(battery.matrix(),
                                             need_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    basis.energies.assign(es.eigenvalues().data(), es.eigenvalues().data() + d);
    if (need_vectors) basis.vectors = es.eigenvectors();
    return basis;
}

std::vector<double> descending(std::vector<double> values) {
    std::stable_sort(values.begin(), values.end(), std::greater<>());
    return values;
}

std::vector<double> spectrum(const DensityMatrix& rho) {
    Operator as_op(rho.space(), rho.matrix());
    if (as_op.is_diagonal()) return rho.populations();
    const Matrix herm = 0.5 * (rho.matrix() + rho.matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

double sorted_dot(const std::vector<double>& weights_desc, const std::vector<double>& energies_asc) {
    double sum = 0.0;
    for (std::size_t k = 0; k < weights_desc.size(); ++k) sum += weights_desc[k] * energies_asc[k];
    return sum;
}

ErgotropyReport make_report(double charged, double passive, Convention convention) {
    ErgotropyReport r;
    r.charged_energy = charged;
    r.passive_energy = passive;
    r.ergotropy = charged - passive;
    r.ratio = charged == 0.0 ? 0.0 : r.ergotropy / charged;
    r.convention = convention;
    return r;
}

// Tr[diag(p) H] summed in Fock order.
double diagonal_energy(const std::vector<double>& p, const Operator& battery) {
    double sum = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        const auto k = static_cast<Eigen::Index>(n);
        sum += p[n] * battery(k, k).real();
    }
    return sum;
}

} // namespace

double passive_energy(std::span<const double> populations, std::span<const double> energies) {
    if (populations.size() != energies.size())
        throw DimensionMismatch("passive_energy", populations.size(), energies.size());
    std::vector<double> e(energies.begin(), energies.end());
    std::sort(e.begin(), e.end());
    return sorted_dot(descending({populations.begin(), populations.end()}), e);
}

DensityMatrix passive_state(const DensityMatrix& rho, const Operator& battery) {
    if (rho.space() != battery.space()) throw DimensionMismatch("passive_state", rho.dim(), battery.dim());
    require_hermitian(rho);
    const auto basis = energy_basis(battery, true);
    const auto r = descending(spectrum(rho));
    Eigen::VectorXd weights(static_cast<Eigen::Index>(r.size()));
    for (std::size_t k = 0; k < r.size(); ++k) weights(static_cast<Eigen::Index>(k)) = r[k];
    Matrix sigma = basis.vectors * weights.cast<complex>().asDiagonal() * basis.vectors.adjoint();
    return DensityMatrix::unchecked(rho.space(), std::move(sigma));
}

ErgotropyReport ergotropy(const DensityMatrix& rho, const Operator& battery, Convention convention) {
    if (rho.space() != battery.space()) throw DimensionMismatch("ergotropy", rho.dim(), battery.dim());
    require_hermitian(rho);
    const auto basis = energy_basis(battery, false);

    if (convention == Convention::dephased) {
        const auto p = rho.populations();
        return make_report(diagonal_energy(p, battery), sorted_dot(descending(p), basis.energies), convention);
    }
    const double charged = basis.fock_diagonal && Operator(rho.space(), rho.matrix()).is_diagonal()
                               ? diagonal_energy(rho.populations(), battery)
                               : real_expectation(battery, rho);
    return make_report(charged, sorted_dot(descending(spectrum(rho)), basis.energies), convention);
}

ErgotropyReport ergotropy(const Ket& state, const Operator& battery, Convention convention) {
    if (state.space() != battery.space()) throw DimensionMismatch("ergotropy", state.dim(), battery.dim());
    const auto basis = energy_basis(battery, false);
    if (convention == Convention::dephased) {
        const auto p = state.populations();
        return make_report(diagonal_energy(p, battery), sorted_dot(descending(p), basis.energies), convention);
    }
    // |psi><psi| has the single nonzero eigenvalue <psi|psi>.
    const double weight = state.amplitudes().squaredNorm();
    const double charged = basis.fock_diagonal ? diagonal_energy(state.populations(), battery)
                                               : real_expectation(battery, state);
    return make_report(charged, weight * basis.energies.front(), convention);
}

std::vector<ErgotropyReport> ergotropy_vs_time(const dynamics::ChargingDrive& drive, double gamma,
                                               double omega_a, std::span<const double> t_grid,
                                               Convention convention) {
    if (!(gamma > 0.0)) throw ValidationError("ergotropy_vs_time: gamma must be > 0");
    double max_abs_alpha = 0.0;
    for (double t : t_grid) {
        if (!std::isfinite(t) || t < 0.0) throw ValidationError("ergotropy_vs_time: times must be finite and >= 0");
        max_abs_alpha = std::max(max_abs_alpha, std::abs(dynamics::coherent_trajectory(t, drive, gamma)));
    }
    const FockSpace space = FockSpace::for_coherent_amplitude(max_abs_alpha);
    const Operator battery = battery_hamiltonian(space, omega_a);

    std::vector<ErgotropyReport> out(t_grid.size());
    parallel_for(t_grid.size(), [&](std::size_t i) {
        const auto state = coherent_state(space, dynamics::coherent_trajectory(t_grid[i], drive, gamma));
        out[i] = ergotropy(state.ket, battery, convention);
    });
    return out;
}

std::vector<RatioPoint> ratio_vs_beta(std::span<const double> beta_grid, double lambda_ab, double gamma,
                                      double omega_a) {
    if (!(gamma > 0.0)) throw ValidationError("ratio_vs_beta: gamma must be > 0");
    for (double b : beta_grid)
        if (!(b > 0.0) || !std::isfinite(b)) throw ValidationError("ratio_vs_beta: |beta| grid must be positive");

    std::vector<RatioPoint> out(beta_grid.size());
    parallel_for(beta_grid.size(), [&](std::size_t i) {
        const dynamics::ChargingDrive drive{lambda_ab, beta_grid[i], 0.0};
        const double abs_alpha = 2.0 * std::abs(lambda_ab) * beta_grid[i] / gamma;
        const FockSpace space = FockSpace::for_coherent_amplitude(abs_alpha);
        const Operator battery = battery_hamiltonian(space, omega_a);
        const auto state = coherent_state(space, abs_alpha);
        RatioPoint& p = out[i];
        p.beta_mag = beta_grid[i];
        p.mean_photons = dynamics::steady_state_photons(drive, gamma);
        p.ratio_dephased = ergotropy(state.ket, battery, Convention::dephased).ratio;
        p.ratio_coherent = ergotropy(state.ket, battery, Convention::coherent).ratio;
    });
    return out;
}

} // namespace qbsim::ergotropy
