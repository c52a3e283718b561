// scenarios.hpp: scenario runners and figure presets behind the CLI

#pragma once

#include "qbsim/cli/config.hpp"
#include "qbsim/cli/table.hpp"

#include <string>
#include <vector>

namespace qbsim::cli {

struct Artifact {
    std::string name;  // file stem
    std::string figure;  // preset that produced it, empty for plain scenarios
    Table table;
    json summary = json::object();
    std::vector<std::string> diagnostics;
};

// Lindblad charging from vacuum, observables every output_stride steps.
Artifact charge_run(const Settings& s);
// Free decay of the steady charged state.
Artifact age_run(const Settings& s);
// Closed-form charging curve with both ergotropy conventions (the fig2a preset).
Artifact charging_curve(const Settings& s);
// Steady-state ergotropy ratio against |beta| (the fig2b preset).
Artifact ratio_curve(const Settings& s);
// Transmission spectrum for parameters.n_bar, with the inferred photon number.
Artifact readout_spectrum(const Settings& s);
// Spectra for the charged battery after aging gamma tau = 0, 1, 2 and infinity (the fig3 preset).
Artifact aging_spectra(const Settings& s);
// SQUID levels and wavefunctions at phi_d (the fig5a preset): two artifacts.
std::vector<Artifact> squid_levels(const Settings& s);
// Qubit frequency across the bias window (the fig5b preset).
Artifact flux_curve(const Settings& s);

std::vector<Artifact> run_scenario(const Settings& s);

struct Written {
    std::string table_path;
    std::string manifest_path;
};

// Writes the table and its manifest under dir. `config` is the effective
// config; the manifest embeds it so that running the manifest reproduces the table.
Written write_artifact(const Artifact& artifact, const Settings& s, const json& config, const Report& report,
                       const std::string& dir);

} // namespace qbsim::cli
