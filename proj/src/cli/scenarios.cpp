#include "qbsim/cli/scenarios.hpp"

#include "qbsim/constants.hpp"
#include "qbsim/dispersive.hpp"
#include "qbsim/dynamics.hpp"
#include "qbsim/ergotropy.hpp"
#include "qbsim/errors.hpp"
#include "qbsim/readout.hpp"
#include "qbsim/squid.hpp"
#include "qbsim/version.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <fstream>

namespace qbsim::cli {

namespace {

using constants::hbar;

dynamics::ChargingDrive drive_of(const Settings& s) { return {s.lambda_ab, s.beta, s.theta_b}; }

FockSpace space_for(const Settings& s, double abs_alpha) {
    return s.dim ? FockSpace(s.dim) : FockSpace::for_coherent_amplitude(abs_alpha);
}

dynamics::LindbladConfig lindblad_config(const Settings& s, FockSpace space, double gamma_t_end) {
    dynamics::LindbladConfig cfg;
    cfg.space = space;
    cfg.dt = s.gamma_dt / s.gamma;
    cfg.t_end = gamma_t_end / s.gamma;
    cfg.snapshot_stride = s.output_stride;
    cfg.omega_a = s.omega_a;
    return cfg;
}

// One row per stored snapshot, with both ergotropy conventions.
Table trajectory_table(const dynamics::Trajectory& traj, const Settings& s, const char* time_name,
                       const char* scaled_name, const std::function<double(double)>& analytic, bool with_power) {
    Table t;
    t.columns = {time_name, scaled_name, "mean_photons", "mean_photons_analytic", "energy_J"};
    if (with_power) t.columns.push_back("power_W");
    for (const char* c : {"ergotropy_dephased_J", "ergotropy_coherent_J", "trace", "purity"}) t.columns.push_back(c);
    const auto battery = ergotropy::battery_hamiltonian(traj.snapshots.front().rho.space(), s.omega_a);
    for (const auto& snap : traj.snapshots) {
        const std::size_t i = snap.step;
        std::vector<double> row{traj.times[i], s.gamma * traj.times[i], traj.mean_photons[i], analytic(traj.times[i]),
                                traj.energy[i]};
        if (with_power) row.push_back(traj.power[i]);
        row.push_back(ergotropy::ergotropy(snap.rho, battery, ergotropy::Convention::dephased).ergotropy);
        row.push_back(ergotropy::ergotropy(snap.rho, battery, ergotropy::Convention::coherent).ergotropy);
        row.push_back(traj.trace[i]);
        row.push_back(traj.purity[i]);
        t.add_row(std::move(row));
    }
    return t;
}

std::string photon_label(double n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", n);
    std::string s = buf;
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') s.pop_back();
    return s;
}

readout::ReadoutParams readout_params(const Settings& s) { return {s.omega_q, s.omega_a, s.g_a, s.line_rate}; }

squid::SquidParams squid_params(const Settings& s) {
    return {s.critical_current, s.capacitance, s.phi_d, s.phi_a_tilde, s.phi_b_tilde, s.flux_convention};
}

squid::SolverOptions solver_options(const Settings& s) {
    squid::SolverOptions o;
    o.grid_size = s.grid_size;
    o.n_states = s.n_states;
    o.boundary = s.boundary;
    return o;
}

std::vector<double> grid(double first, double last, std::size_t points) {
    if (points == 1) return {first};
    return readout::linear_grid(first, last, points);
}

} // namespace

Artifact charge_run(const Settings& s) {
    const auto drive = drive_of(s);
    const double abs_alpha = 2.0 * std::abs(s.lambda_ab) * s.beta / s.gamma;
    const FockSpace space = space_for(s, abs_alpha);
    const auto traj = dynamics::lindblad_evolve(dynamics::charge_hamiltonian(drive, space), s.gamma,
                                                dm_from_ket(Ket::basis(space, 0)),
                                                lindblad_config(s, space, s.gamma_t_end));
    Artifact a;
    a.name = "charge";
    a.table = trajectory_table(
        traj, s, "t_s", "gamma_t", [&](double t) { return dynamics::analytic_mean_photons(t, drive, s.gamma); }, true);

    double worst = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        worst = std::max(worst,
                         std::abs(traj.mean_photons[i] - dynamics::analytic_mean_photons(traj.times[i], drive, s.gamma)));
    a.summary["dim"] = space.dim();
    a.summary["steps"] = traj.times.size() - 1;
    a.summary["final_mean_photons"] = traj.mean_photons.back();
    a.summary["steady_state_photons"] = dynamics::steady_state_photons(drive, s.gamma);
    a.summary["steady_state_energy_J"] = hbar * s.omega_a * dynamics::steady_state_photons(drive, s.gamma);
    a.summary["max_abs_deviation_from_closed_form"] = worst;
    a.summary["peak_power_gamma_t"] = s.gamma * dynamics::peak_power_time(s.gamma);
    a.diagnostics = traj.diagnostics;
    return a;
}

Artifact age_run(const Settings& s) {
    const auto drive = drive_of(s);
    // the steady charged state, alpha = 2 i lambda beta / gamma
    const complex alpha0 = dynamics::coherent_trajectory(std::numeric_limits<double>::infinity(), drive, s.gamma);
    const double n_max = std::norm(alpha0);
    const FockSpace space = space_for(s, std::abs(alpha0));
    const auto start = coherent_state(space, alpha0, Normalization::strict);
    const auto zero = dynamics::charge_hamiltonian({0.0, 0.0, 0.0}, space);
    const auto traj =
        dynamics::lindblad_evolve(zero, s.gamma, dm_from_ket(start.ket), lindblad_config(s, space, s.gamma_tau_end));
    Artifact a;
    a.name = "age";
    a.table = trajectory_table(
        traj, s, "tau_s", "gamma_tau", [&](double t) { return dynamics::aging_mean_photons(t, n_max, s.gamma); },
        false);
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        worst = std::max(worst,
                         std::abs(traj.mean_photons[i] - dynamics::aging_mean_photons(traj.times[i], n_max, s.gamma)));
    a.summary["dim"] = space.dim();
    a.summary["initial_mean_photons"] = n_max;
    a.summary["truncation_deficit"] = start.truncation_deficit;
    a.summary["final_mean_photons"] = traj.mean_photons.back();
    a.summary["max_abs_deviation_from_decay_law"] = worst;
    a.diagnostics = traj.diagnostics;
    return a;
}

Artifact charging_curve(const Settings& s) {
    const auto drive = drive_of(s);
    const auto times = grid(0.0, s.gamma_t_end / s.gamma, s.time_points);
    const auto dephased = ergotropy::ergotropy_vs_time(drive, s.gamma, s.omega_a, times, ergotropy::Convention::dephased);
    const auto coherent = ergotropy::ergotropy_vs_time(drive, s.gamma, s.omega_a, times, ergotropy::Convention::coherent);

    Artifact a;
    a.name = "ergotropy";
    a.table.columns = {"t_s",     "gamma_t", "mean_photons", "energy_J", "power_W", "ergotropy_dephased_J",
                       "ergotropy_coherent_J"};
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        const double n = dynamics::analytic_mean_photons(t, drive, s.gamma);
        a.table.add_row({t, s.gamma * t, n, hbar * s.omega_a * n, dynamics::charging_power(t, drive, s.gamma, s.omega_a),
                         dephased[i].ergotropy, coherent[i].ergotropy});
    }

    const double quantum = hbar * s.omega_a;
    const double t_end = times.back();
    const complex alpha = dynamics::coherent_trajectory(t_end, drive, s.gamma);
    const auto state = coherent_state(FockSpace::for_coherent_amplitude(std::abs(alpha)), std::abs(alpha));
    std::vector<double> amps;
    std::size_t mode = 0;
    for (std::size_t k = 0; k < state.ket.dim(); ++k) {
        amps.push_back(std::abs(state.ket[k]));
        if (amps[k] > amps[mode]) mode = k;
    }
    std::sort(amps.begin(), amps.end(), std::greater<>());
    amps.resize(std::min<std::size_t>(4, amps.size()));

    a.summary["final_gamma_t"] = s.gamma * t_end;
    a.summary["final_mean_photons"] = std::norm(alpha);
    a.summary["final_ergotropy_dephased_quanta"] = dephased.back().ergotropy / quantum;
    a.summary["final_ergotropy_coherent_quanta"] = coherent.back().ergotropy / quantum;
    a.summary["final_ratio_dephased"] = dephased.back().ratio;
    a.summary["largest_fock_amplitudes"] = amps;
    a.summary["largest_fock_amplitude_level"] = mode;
    a.summary["peak_power_gamma_t"] = s.gamma * dynamics::peak_power_time(s.gamma);
    a.summary["peak_power_W"] = dynamics::charging_power(dynamics::peak_power_time(s.gamma), drive, s.gamma, s.omega_a);
    return a;
}

Artifact ratio_curve(const Settings& s) {
    const auto betas = grid(s.beta_min, s.beta_max, s.beta_points);
    const auto curve = ergotropy::ratio_vs_beta(betas, s.lambda_ab, s.gamma, s.omega_a);
    Artifact a;
    a.name = "ratio-sweep";
    a.table.columns = {"beta", "mean_photons", "ratio_dephased", "ratio_coherent"};
    bool monotone = true;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        a.table.add_row({curve[i].beta_mag, curve[i].mean_photons, curve[i].ratio_dephased, curve[i].ratio_coherent});
        if (i > 0 && curve[i].ratio_dephased < curve[i - 1].ratio_dephased) monotone = false;
    }
    a.summary["dephased_ratio_nondecreasing"] = monotone;
    return a;
}

Artifact readout_spectrum(const Settings& s) {
    const auto p = readout_params(s);
    auto probe = grid(s.omega_q + s.probe_min, s.omega_q + s.probe_max, s.probe_points);
    const auto spec = readout::spectrum_sweep(probe, s.n_bar, p);
    Artifact a;
    a.name = "readout";
    a.table.columns = {"detuning_rad_s", "transmission"};
    for (std::size_t i = 0; i < probe.size(); ++i) a.table.add_row({probe[i] - s.omega_q, spec.transmission[i]});
    a.summary["n_bar"] = s.n_bar;
    a.summary["dip_detuning_rad_s"] = readout::dip_frequency(s.n_bar, p) - s.omega_q;
    a.summary["dip_slope_rad_s_per_photon"] = s.g_a * s.g_a / p.delta_a();
    a.diagnostics = spec.diagnostics;
    try {
        const auto est = readout::infer_photon_number(spec, p);
        a.summary["inferred_n_bar"] = est.n_bar;
        for (const auto& d : est.diagnostics) a.diagnostics.push_back(d);
    } catch (const ValidationError& e) {
        a.diagnostics.push_back(e.what());
    }
    return a;
}

Artifact aging_spectra(const Settings& s) {
    const auto p = readout_params(s);
    const double n_max = dynamics::steady_state_photons(drive_of(s), s.gamma);
    const std::vector<double> ns{n_max, n_max * std::exp(-1.0), n_max * std::exp(-2.0), 0.0};
    auto probe = grid(s.omega_q + s.probe_min, s.omega_q + s.probe_max, s.probe_points);

    Artifact a;
    a.name = "aging-spectra";
    a.table.columns = {"detuning_rad_s"};
    std::vector<readout::Spectrum> spectra;
    json inferred = json::array();
    json dips = json::array();
    for (double n : ns) {
        a.table.columns.push_back("T_n" + photon_label(n));
        spectra.push_back(readout::spectrum_sweep(probe, n, p));
        for (const auto& d : spectra.back().diagnostics) a.diagnostics.push_back(d);
        dips.push_back(readout::dip_frequency(n, p) - s.omega_q);
        try {
            inferred.push_back(readout::infer_photon_number(spectra.back(), p).n_bar);
        } catch (const ValidationError& e) {
            inferred.push_back(nullptr);
            a.diagnostics.push_back(e.what());
        }
    }
    for (std::size_t i = 0; i < probe.size(); ++i) {
        std::vector<double> row{probe[i] - s.omega_q};
        for (const auto& sp : spectra) row.push_back(sp.transmission[i]);
        a.table.add_row(std::move(row));
    }
    a.summary["photon_numbers"] = ns;
    a.summary["dip_detunings_rad_s"] = dips;
    a.summary["inferred_photon_numbers"] = inferred;
    return a;
}

std::vector<Artifact> squid_levels(const Settings& s) {
    const auto params = squid_params(s);
    const auto spec = squid::solve_levels(params, solver_options(s));
    const auto couplings = squid::circuit_couplings(params, spec);

    Artifact levels;
    levels.name = "squid-levels";
    levels.table.columns = {"level", "energy_J", "transition_from_ground_rad_s", "mu_0k"};
    for (std::size_t k = 0; k < spec.energies.size(); ++k)
        levels.table.add_row({static_cast<double>(k), spec.energies[k], (spec.energies[k] - spec.energies[0]) / hbar,
                              spec.mu(0, static_cast<Eigen::Index>(k))});

    Artifact waves;
    waves.name = "squid-wavefunctions";
    waves.table.columns = {"delta_rad", "potential_J"};
    for (std::size_t k = 0; k < spec.energies.size(); ++k) waves.table.columns.push_back("psi_" + std::to_string(k));
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
        std::vector<double> row{spec.grid[i], -spec.U0 * std::cos(spec.grid[i])};
        for (std::size_t k = 0; k < spec.energies.size(); ++k)
            row.push_back(spec.wavefunctions(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)));
        waves.table.add_row(std::move(row));
    }

    json summary;
    summary["phi_d_Phi0"] = s.phi_d;
    summary["U0_J"] = spec.U0;
    summary["U1_J"] = spec.U1;
    summary["energies_J"] = spec.energies;
    summary["omega_q_rad_s"] = spec.omega_q;
    summary["plasma_frequency_rad_s"] = spec.U0 > 0.0 ? squid::plasma_frequency(params) : 0.0;
    summary["n_bound"] = spec.n_bound;
    summary["mu01"] = couplings.mu01;
    summary["g_a_rad_s"] = couplings.g_a;
    summary["g_b_rad_s"] = couplings.g_b;
    try {
        const auto d = dispersive::dispersive_map({s.omega_a, spec.omega_q, s.omega_b, couplings.g_a, couplings.g_b, s.gamma});
        summary["ratio_a"] = d.ratio_a;
        summary["ratio_b"] = d.ratio_b;
        summary["lambda_ab_rad_s"] = d.lambda_ab;
    } catch (const ValidationError& e) {
        levels.diagnostics.push_back(e.what());
    }
    levels.summary = summary;
    waves.summary = summary;
    levels.diagnostics.insert(levels.diagnostics.end(), spec.diagnostics.begin(), spec.diagnostics.end());
    waves.diagnostics = levels.diagnostics;
    return {levels, waves};
}

Artifact flux_curve(const Settings& s) {
    const auto phis = grid(s.phi_min, s.phi_max, s.phi_points);
    const auto curve = squid::frequency_vs_flux(squid_params(s), phis, solver_options(s));
    Artifact a;
    a.name = "flux-sweep";
    a.table.columns = {"phi_d_Phi0", "omega_q_rad_s"};
    for (const auto& pt : curve) a.table.add_row({pt.phi_d, pt.omega_q});
    return a;
}

std::vector<Artifact> run_scenario(const Settings& s) {
    auto tag = [](Artifact a, const std::string& name) {
        a.figure = name;
        a.name = name;
        return a;
    };
    switch (s.scenario) {
    case Scenario::charge: return {charge_run(s)};
    case Scenario::age: return {age_run(s)};
    case Scenario::ergotropy: return {charging_curve(s)};
    case Scenario::ratio_sweep: return {ratio_curve(s)};
    case Scenario::readout: return {readout_spectrum(s)};
    case Scenario::squid_levels: return squid_levels(s);
    case Scenario::flux_sweep: return {flux_curve(s)};
    case Scenario::reproduce: break;
    }
    std::vector<Artifact> out;
    const bool all = s.figure == "all";
    if (all || s.figure == "fig2a") out.push_back(tag(charging_curve(s), "fig2a"));
    if (all || s.figure == "fig2b") out.push_back(tag(ratio_curve(s), "fig2b"));
    if (all || s.figure == "fig3") out.push_back(tag(aging_spectra(s), "fig3"));
    if (all || s.figure == "fig5a") {
        auto pair = squid_levels(s);
        out.push_back(tag(pair[0], "fig5a"));
        auto waves = tag(pair[1], "fig5a_wavefunctions");
        waves.figure = "fig5a";
        out.push_back(waves);
    }
    if (all || s.figure == "fig5b") out.push_back(tag(flux_curve(s), "fig5b"));
    return out;
}

Written write_artifact(const Artifact& artifact, const Settings& s, const json& config, const Report& report,
                       const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const std::string ext = s.format == "json" ? ".json" : ".csv";
    Written w;
    w.table_path = (fs::path(dir) / (artifact.name + ext)).string();
    w.manifest_path = (fs::path(dir) / (artifact.name + ".manifest.json")).string();

    {
        std::ofstream out(w.table_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + w.table_path);
        if (s.format == "json") out << table_to_json(artifact.table).dump(1) << '\n';
        else write_csv(out, artifact.table);
        if (!out) throw std::runtime_error("write failed for " + w.table_path);
    }

    // Re-running this exact config regenerates the table.
    json rerun = config;
    if (!artifact.figure.empty()) rerun["figure"] = artifact.figure;

    json m;
    m["qbsim_version"] = version;
    m["artifact"] = artifact.name;
    m["table"] = {{"file", fs::path(w.table_path).filename().string()},
                  {"format", s.format},
                  {"columns", artifact.table.columns},
                  {"rows", artifact.table.rows.size()}};
    m["config_hash"] = config_hash(rerun);
    m["resolved"] = settings_to_json(s);
    if (!artifact.figure.empty()) m["resolved"]["figure"] = artifact.figure;
    m["derived"] = report.derived;
    m["warnings"] = report.warnings;
    m["summary"] = artifact.summary;
    m["diagnostics"] = artifact.diagnostics;
    m["config"] = rerun;

    std::ofstream out(w.manifest_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + w.manifest_path);
    out << m.dump(2) << '\n';
    return w;
}

} // namespace qbsim::cli
