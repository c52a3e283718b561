// config.hpp: scenario configuration for the qbsim command line
//
// A config is a JSON object:
//
//   {
//     "scenario": "charge",
//     "frequency_convention": "angular",
//     "parameters": { "omega_a": "2pi*5 GHz", "lambda_ab": "0.1 MHz", "beta": 0.4, ... },
//     "numerics":   { "gamma_dt": 1e-3, "grid_size": 8192, ... },
//     "output":     { "dir": "qbsim-out", "format": "csv" }
//   }
//
// Frequencies are strings with a unit suffix. "rad/s" values are taken as
// given; a "2pi*" prefix marks an ordinary frequency (x Hz -> 2 pi x rad/s).
// Bare Hz-family values follow `frequency_convention`: "angular" reads
// "0.1 MHz" as 1e5 rad/s, "ordinary" as 2 pi x 1e5 rad/s. The flag itself is
// mandatory. Keys left out take the defaults in `schema()`; unknown keys are
// rejected.

#pragma once

#include "json.hpp"
#include "qbsim/squid.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qbsim::cli {

using json = nlohmann::ordered_json;

enum class Scenario { charge, age, ergotropy, ratio_sweep, readout, squid_levels, flux_sweep, reproduce };

const char* to_string(Scenario s);
std::optional<Scenario> parse_scenario(std::string_view name);
const std::vector<std::string>& scenario_names();

// Figure presets understood by `reproduce`.
const std::vector<std::string>& figure_names();

enum class FrequencyConvention { angular, ordinary };

enum class Kind { frequency, flux, current, capacitance, number, count, text };

struct KeySpec {
    std::string section;  // "parameters", "numerics" or "output"
    std::string key;
    Kind kind;
    json fallback;
    std::vector<std::string> choices;  // for text keys
    std::string help;
};

const std::vector<KeySpec>& schema();

// Everything in SI units, frequencies in rad/s.
struct Settings {
    Scenario scenario = Scenario::charge;
    std::string figure;  // reproduce only
    FrequencyConvention convention = FrequencyConvention::angular;

    double omega_a = 0, omega_b = 0, omega_q = 0;
    double g_a = 0, g_b = 0, lambda_ab = 0, gamma = 0, line_rate = 0;
    double beta = 0, theta_b = 0, n_bar = 0;
    double critical_current = 0, capacitance = 0;
    double phi_d = 0, phi_a_tilde = 0, phi_b_tilde = 0;  // units of Phi0
    squid::FluxConvention flux_convention = squid::FluxConvention::bias_only;

    double gamma_dt = 0, gamma_t_end = 0, gamma_tau_end = 0;
    std::size_t dim = 0;  // 0: choose from the largest coherent amplitude
    std::size_t output_stride = 0, time_points = 0;
    std::size_t grid_size = 0, n_states = 0;
    squid::Boundary boundary = squid::Boundary::periodic;
    double probe_min = 0, probe_max = 0;  // offsets from omega_q, rad/s
    std::size_t probe_points = 0;
    double beta_min = 0, beta_max = 0;
    std::size_t beta_points = 0;
    double phi_min = 0, phi_max = 0;
    std::size_t phi_points = 0;
    double validity_threshold = 0;

    std::string out_dir;
    std::string format;  // csv or json
};

struct Report {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
    json derived = json::object();
    bool ok() const { return errors.empty(); }
};

// Reads a config file, or the `config` member of a run manifest.
json load_config(const std::string& path);

// Applies "section.key=value"; the value is parsed as JSON when possible and
// taken as a string otherwise.
void apply_override(json& config, const std::string& assignment);

// Full check of keys, units, ranges and the dispersive pre-flight. Fills
// `settings` when there are no errors.
Report validate(const json& config, Settings* settings = nullptr);

// Like validate but throws ValidationError carrying every error message.
Settings resolve(const json& config);

// Parses one frequency string under the given convention; throws ValidationError.
double parse_frequency(const json& value, FrequencyConvention convention, const std::string& key);

json report_to_json(const Report& r);
json settings_to_json(const Settings& s);

// FNV-1a 64-bit digest of the compact dump, as 16 hex digits.
std::string config_hash(const json& config);

} // namespace qbsim::cli
