#include "qbsim/dynamics.hpp"

#include "qbsim/constants.hpp"
#include "qbsim/errors.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <sstream>

#if defined(__SSE2__)
#include <pmmintrin.h>
#include <xmmintrin.h>
#endif

namespace qbsim::dynamics {

using constants::hbar;

complex ChargingDrive::beta() const {
    return std::polar(beta_mag, theta_b);
}

void ChargingDrive::validate() const {
    if (!std::isfinite(lambda_ab)) throw ValidationError("ChargingDrive: lambda_ab must be finite");
    if (!std::isfinite(beta_mag) || beta_mag < 0.0)
        throw ValidationError("ChargingDrive: |beta| must be finite and >= 0");
    if (!std::isfinite(theta_b)) throw ValidationError("ChargingDrive: theta_b must be finite");
}

Operator charge_hamiltonian(const ChargingDrive& drive, FockSpace space) {
    drive.validate();
    const Operator a = annihilation_op(space);
    const complex b = drive.beta();
    Matrix h = -hbar * drive.lambda_ab * (std::conj(b) * a.matrix() + b * a.matrix().adjoint());
    return Operator(space, std::move(h), Units::energy);
}

namespace {

using SparseMatrix = Eigen::SparseMatrix<complex>;

// Right-hand side of the damped master equation. A tridiagonal Hamiltonian
// (every charging Hamiltonian) is applied elementwise from its three bands;
// anything else goes through sparse products.
class Generator {
public:
    Generator(const Operator& hamiltonian, double gamma) : gamma_(gamma) {
        const Matrix h = hamiltonian.matrix() / hbar;
        const auto d = h.rows();
        tridiagonal_ = true;
        for (Eigen::Index j = 0; j < d && tridiagonal_; ++j)
            for (Eigen::Index i = 0; i < d; ++i)
                if (std::abs(i - j) > 1 && h(i, j) != 0.0) {
                    tridiagonal_ = false;
                    break;
                }
        if (tridiagonal_) {
            diag_ = h.diagonal();
            upper_ = Eigen::VectorXcd::Zero(d);  // upper_(k) = h(k, k+1)
            lower_ = Eigen::VectorXcd::Zero(d);  // lower_(k) = h(k+1, k)
            for (Eigen::Index k = 0; k + 1 < d; ++k) {
                upper_(k) = h(k, k + 1);
                lower_(k) = h(k + 1, k);
            }
            root_.resize(d + 1);
            for (Eigen::Index k = 0; k <= d; ++k) root_(k) = std::sqrt(static_cast<double>(k));
        } else {
            h_ = h.sparseView(0.0, 0.0);
            a_ = annihilation_op(hamiltonian.space()).matrix().sparseView();
            a_dag_ = a_.adjoint();
        }
    }

    void apply(const Matrix& rho, Matrix& out) const {
        if (tridiagonal_) apply_banded(rho, out);
        else apply_sparse(rho, out);
    }

private:
    // out_ij = -i (H rho - rho H)_ij + gamma sqrt((i+1)(j+1)) rho_{i+1,j+1} - (gamma/2)(i+j) rho_ij
    void apply_banded(const Matrix& rho, Matrix& out) const {
        const Eigen::Index d = rho.rows();
        const complex minus_i(0.0, -1.0);
        for (Eigen::Index j = 0; j < d; ++j) {
            for (Eigen::Index i = 0; i < d; ++i) {
                complex comm = (diag_(i) - diag_(j)) * rho(i, j);
                if (i > 0) comm += lower_(i - 1) * rho(i - 1, j);
                if (i + 1 < d) comm += upper_(i) * rho(i + 1, j);
                if (j > 0) comm -= rho(i, j - 1) * upper_(j - 1);
                if (j + 1 < d) comm -= rho(i, j + 1) * lower_(j);
                complex v = minus_i * comm;
                if (gamma_ != 0.0) {
                    if (i + 1 < d && j + 1 < d) v += gamma_ * root_(i + 1) * root_(j + 1) * rho(i + 1, j + 1);
                    v -= 0.5 * gamma_ * static_cast<double>(i + j) * rho(i, j);
                }
                out(i, j) = v;
            }
        }
    }

    void apply_sparse(const Matrix& rho, Matrix& out) const {
        const complex minus_i(0.0, -1.0);
        out.noalias() = minus_i * (h_ * rho);
        out.noalias() -= minus_i * (rho * h_);
        if (gamma_ != 0.0) {
            const Eigen::Index d = rho.rows();
            Matrix jump = a_ * rho;
            out.noalias() += gamma_ * (jump * a_dag_);
            for (Eigen::Index j = 0; j < d; ++j)
                for (Eigen::Index i = 0; i < d; ++i) out(i, j) -= 0.5 * gamma_ * static_cast<double>(i + j) * rho(i, j);
        }
    }

    double gamma_;
    bool tridiagonal_ = false;
    Eigen::VectorXcd diag_, upper_, lower_;
    Eigen::VectorXd root_;
    SparseMatrix h_;
    SparseMatrix a_;
    SparseMatrix a_dag_;
};

// Coherence tails decay through the subnormal range, where arithmetic is
// orders of magnitude slower; flush them to zero for the duration of a run.
class FlushSubnormals {
public:
#if defined(__SSE2__)
    FlushSubnormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | _MM_FLUSH_ZERO_ON | _MM_DENORMALS_ZERO_ON); }
    ~FlushSubnormals() { _mm_setcsr(saved_); }

private:
    unsigned int saved_;
#endif
};

double photon_number(const Matrix& rho) {
    double n = 0.0;
    for (Eigen::Index k = 0; k < rho.rows(); ++k) n += static_cast<double>(k) * rho(k, k).real();
    return n;
}

complex field(const Matrix& rho) {
    // Tr[rho a] = sum_n sqrt(n) rho_{n, n-1}
    complex f = 0.0;
    for (Eigen::Index n = 1; n < rho.rows(); ++n) f += std::sqrt(static_cast<double>(n)) * rho(n, n - 1);
    return f;
}

double purity_of(const Matrix& rho) {
    return rho.cwiseProduct(rho.transpose()).sum().real();
}

} // namespace

Trajectory lindblad_evolve(const Operator& hamiltonian, double gamma, const DensityMatrix& rho0,
                           const LindbladConfig& cfg) {
    if (hamiltonian.space() != rho0.space())
        throw DimensionMismatch("lindblad_evolve", hamiltonian.dim(), rho0.dim());
    if (cfg.space != rho0.space())
        throw DimensionMismatch("lindblad_evolve: config space", cfg.space.dim(), rho0.dim());
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ValidationError("lindblad_evolve: dt must be > 0");
    if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end))
        throw ValidationError("lindblad_evolve: t_end must be >= 0");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ValidationError("lindblad_evolve: gamma must be >= 0");
    if (cfg.snapshot_stride == 0) throw ValidationError("lindblad_evolve: snapshot_stride must be >= 1");

    const double h_scale = hamiltonian.matrix().cwiseAbs().maxCoeff();
    if (hamiltonian.hermiticity_error() > 1e-9 * h_scale)
        throw ValidationError("lindblad_evolve: Hamiltonian is not Hermitian");
    if (const auto check = rho0.check(cfg.tolerances); !check.ok)
        throw ValidationError("lindblad_evolve: initial state invalid: " + check.describe());

    Trajectory traj;
    const double drive_rate = cfg.rate_hint > 0.0 ? cfg.rate_hint : h_scale / hbar;
    if (const double guard = cfg.dt * std::max(drive_rate, gamma); guard > 0.05) {
        std::ostringstream os;
        os << "step guard: dt * max rate = " << guard << " exceeds 0.05";
        traj.diagnostics.push_back(os.str());
    }

    const FlushSubnormals flush;
    const Generator gen(hamiltonian, gamma);
    const double energy_quantum = hbar * cfg.omega_a;
    const std::size_t n_steps =
        cfg.t_end == 0.0 ? 0 : static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-9));

    Matrix rho = rho0.matrix();
    const auto d = rho.rows();
    Matrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), stage(d, d);

    traj.times.reserve(n_steps + 1);
    auto record = [&](double t, const Matrix& derivative) {
        const double n = photon_number(rho);
        traj.times.push_back(t);
        traj.mean_photons.push_back(n);
        traj.energy.push_back(energy_quantum * n);
        traj.power.push_back(energy_quantum * photon_number(derivative));
        traj.trace.push_back(rho.trace().real());
        traj.purity.push_back(purity_of(rho));
        traj.mean_field.push_back(field(rho));
    };
    auto snapshot = [&](std::size_t step, double t) {
        auto state = DensityMatrix::unchecked(cfg.space, rho);
        const auto check = state.check(cfg.tolerances);
        if (!check.ok) {
            std::ostringstream os;
            os << "lindblad_evolve: invariant violated at step " << step << " (t = " << t
               << " s): " << check.describe();
            throw InvariantViolation(os.str());
        }
        traj.snapshots.push_back(Snapshot{step, t, std::move(state)});
    };

    double t = 0.0;
    gen.apply(rho, k1);
    record(t, k1);
    snapshot(0, t);
    for (std::size_t step = 1; step <= n_steps; ++step) {
        const double h = std::min(cfg.dt, cfg.t_end - t);
        stage = rho + (0.5 * h) * k1;
        gen.apply(stage, k2);
        stage = rho + (0.5 * h) * k2;
        gen.apply(stage, k3);
        stage = rho + h * k3;
        gen.apply(stage, k4);
        rho.noalias() += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t = step == n_steps ? cfg.t_end : static_cast<double>(step) * cfg.dt;

        gen.apply(rho, k1);
        record(t, k1);
        if (!std::isfinite(traj.mean_photons.back())) {
            std::ostringstream os;
            os << "lindblad_evolve: non-finite photon number at step " << step;
            throw InvariantViolation(os.str());
        }
        if (step % cfg.snapshot_stride == 0 || step == n_steps) snapshot(step, t);
    }
    return traj;
}

double analytic_mean_photons(double t, const ChargingDrive& drive, double gamma) {
    if (gamma < 0.0) throw ValidationError("analytic_mean_photons: gamma must be >= 0");
    const double drive_sq = drive.lambda_ab * drive.lambda_ab * drive.beta_mag * drive.beta_mag;
    if (gamma == 0.0) return drive_sq * t * t;
    const double s = -std::expm1(-0.5 * gamma * t);  // 1 - e^{-gamma t/2}
    return 4.0 * drive_sq * s * s / (gamma * gamma);
}

double steady_state_photons(const ChargingDrive& drive, double gamma) {
    if (!(gamma > 0.0)) throw ValidationError("steady_state_photons: gamma must be > 0");
    const double amp = 2.0 * drive.lambda_ab * drive.beta_mag / gamma;
    return amp * amp;
}

double charging_power(double t, const ChargingDrive& drive, double gamma, double omega_a) {
    if (gamma < 0.0) throw ValidationError("charging_power: gamma must be >= 0");
    const double drive_sq = drive.lambda_ab * drive.lambda_ab * drive.beta_mag * drive.beta_mag;
    if (gamma == 0.0) return 2.0 * hbar * omega_a * drive_sq * t;
    return 4.0 * hbar * omega_a * drive_sq / gamma * (std::exp(-0.5 * gamma * t) - std::exp(-gamma * t));
}

double peak_power_time(double gamma) {
    if (!(gamma > 0.0)) throw ValidationError("peak_power_time: gamma must be > 0");
    return 2.0 * std::numbers::ln2 / gamma;
}

complex coherent_trajectory(double t, const ChargingDrive& drive, double gamma) {
    if (gamma < 0.0) throw ValidationError("coherent_trajectory: gamma must be >= 0");
    const complex i_lambda_beta = complex(0.0, drive.lambda_ab) * drive.beta();
    if (gamma == 0.0) return i_lambda_beta * t;
    return (2.0 / gamma) * i_lambda_beta * (-std::expm1(-0.5 * gamma * t));
}

double aging_mean_photons(double tau, double n_max, double gamma) {
    if (n_max < 0.0) throw ValidationError("aging_mean_photons: n_max must be >= 0");
    if (gamma < 0.0) throw ValidationError("aging_mean_photons: gamma must be >= 0");
    return n_max * std::exp(-gamma * tau);
}

CoherentState aging_state(double tau, complex alpha0, double gamma, FockSpace space) {
    if (gamma < 0.0) throw ValidationError("aging_state: gamma must be >= 0");
    return coherent_state(space, alpha0 * std::exp(-0.5 * gamma * tau));
}

} // namespace qbsim::dynamics
