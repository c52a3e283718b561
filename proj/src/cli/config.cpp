#include "qbsim/cli/config.hpp"

#include "qbsim/constants.hpp"
#include "qbsim/dispersive.hpp"
#include "qbsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

namespace qbsim::cli {

namespace {

const std::vector<std::pair<Scenario, std::string>>& scenario_table() {
    static const std::vector<std::pair<Scenario, std::string>> table{
        {Scenario::charge, "charge"},
        {Scenario::age, "age"},
        {Scenario::ergotropy, "ergotropy"},
        {Scenario::ratio_sweep, "ratio-sweep"},
        {Scenario::readout, "readout"},
        {Scenario::squid_levels, "squid-levels"},
        {Scenario::flux_sweep, "flux-sweep"},
        {Scenario::reproduce, "reproduce"},
    };
    return table;
}

const std::vector<std::string> top_level_keys{"scenario",   "figure",   "frequency_convention", "parameters",
                                               "numerics",   "output",   "description"};

const char* convention_help =
    "frequency_convention must be \"angular\" (bare Hz/MHz/GHz values are read as rad/s) "
    "or \"ordinary\" (bare values are multiplied by 2 pi)";

struct Unit {
    const char* name;
    double scale;
};

const std::vector<Unit> frequency_units{{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}};
const std::vector<Unit> current_units{{"A", 1.0}, {"mA", 1e-3}, {"uA", 1e-6}, {"nA", 1e-9}};
const std::vector<Unit> capacitance_units{{"F", 1.0}, {"nF", 1e-9}, {"pF", 1e-12}, {"fF", 1e-15}};
const std::vector<Unit> flux_units{{"Phi0", 1.0}, {"Wb", 1.0 / constants::flux_quantum}};

const std::string number_pattern = R"(([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?))";

double parse_with_units(const json& value, const std::vector<Unit>& units, const std::string& key,
                        const char* what) {
    std::string expected;
    for (const auto& u : units) expected += (expected.empty() ? "" : ", ") + std::string(u.name);
    if (!value.is_string())
        throw ValidationError(key + ": " + what + " needs a unit suffix (" + expected + "), e.g. \"1.5 " +
                              units.front().name + "\"");
    static const std::regex re("^\\s*" + number_pattern + "\\s*([A-Za-z0-9/]+)\\s*$");
    std::smatch m;
    const std::string text = value.get<std::string>();
    if (!std::regex_match(text, m, re))
        throw ValidationError(key + ": cannot parse \"" + text + "\" as a " + what + " with unit suffix (" +
                              expected + ")");
    for (const auto& u : units)
        if (m[2] == u.name) return std::stod(m[1]) * u.scale;
    throw ValidationError(key + ": unknown unit \"" + m[2].str() + "\" for a " + what + " (expected " + expected +
                          ")");
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

const KeySpec* find_spec(const std::string& section, const std::string& key) {
    for (const auto& s : schema())
        if (s.section == section && s.key == key) return &s;
    return nullptr;
}

} // namespace

const char* to_string(Scenario s) {
    for (const auto& [value, name] : scenario_table())
        if (value == s) return name.c_str();
    return "?";
}

std::optional<Scenario> parse_scenario(std::string_view name) {
    for (const auto& [value, n] : scenario_table())
        if (n == name) return value;
    return std::nullopt;
}

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& entry : scenario_table()) v.push_back(entry.second);
        return v;
    }();
    return names;
}

const std::vector<std::string>& figure_names() {
    static const std::vector<std::string> names{"fig2a", "fig2b", "fig3", "fig5a", "fig5b"};
    return names;
}

const std::vector<KeySpec>& schema() {
    static const std::vector<KeySpec> specs{
        {"parameters", "omega_a", Kind::frequency, "2pi*5 GHz", {}, "cavity (battery) frequency"},
        {"parameters", "omega_b", Kind::frequency, "2pi*4 GHz", {}, "drive-field centre; inferred from the switch-off point"},
        {"parameters", "omega_q", Kind::frequency, "2pi*4.5 GHz", {}, "qubit frequency"},
        {"parameters", "g_a", Kind::frequency, "10 MHz", {}, "qubit-cavity coupling"},
        {"parameters", "g_b", Kind::frequency, "10 MHz", {}, "qubit-drive coupling"},
        {"parameters", "lambda_ab", Kind::frequency, "0.1 MHz", {}, "effective charging coupling"},
        {"parameters", "gamma", Kind::frequency, "0.01 MHz", {}, "cavity energy decay rate"},
        {"parameters", "line_rate", Kind::frequency, "0.03 MHz", {}, "qubit decay rate into the readout line"},
        {"parameters", "beta", Kind::number, 0.4, {}, "drive amplitude |beta|"},
        {"parameters", "theta_b", Kind::number, 0.0, {}, "drive phase, rad"},
        {"parameters", "n_bar", Kind::number, 64.0, {}, "stored photon number probed by the readout scenario"},
        {"parameters", "critical_current", Kind::current, "0.9794 uA", {}, "junction critical current"},
        {"parameters", "capacitance", Kind::capacitance, "3.663 pF", {}, "SQUID loop capacitance"},
        {"parameters", "phi_d", Kind::flux, "1.977 Phi0", {}, "DC bias flux"},
        {"parameters", "phi_a_tilde", Kind::flux, "0.001 Phi0", {}, "cavity zero-point flux"},
        {"parameters", "phi_b_tilde", Kind::flux, "0.002 Phi0", {}, "waveguide zero-point flux"},
        {"parameters", "flux_convention", Kind::text, "bias_only", {"bias_only", "bias_plus_zero_point"},
         "flux entering the well depth"},

        {"numerics", "gamma_dt", Kind::number, 1e-3, {}, "integration step in units of 1/gamma"},
        {"numerics", "gamma_t_end", Kind::number, 15.0, {}, "charging duration in units of 1/gamma"},
        {"numerics", "gamma_tau_end", Kind::number, 15.0, {}, "aging duration in units of 1/gamma"},
        {"numerics", "dim", Kind::count, 0, {}, "Fock truncation; 0 picks it from the largest amplitude"},
        {"numerics", "output_stride", Kind::count, 100, {}, "integration steps per output row"},
        {"numerics", "time_points", Kind::count, 301, {}, "rows of closed-form time tables"},
        {"numerics", "grid_size", Kind::count, 8192, {}, "phase grid points for the SQUID solver"},
        {"numerics", "n_states", Kind::count, 4, {}, "SQUID levels to extract"},
        {"numerics", "boundary", Kind::text, "periodic", {"periodic", "dirichlet"}, "SQUID boundary condition"},
        {"numerics", "probe_min", Kind::frequency, "-2.4e6 rad/s", {}, "probe window start, offset from omega_q"},
        {"numerics", "probe_max", Kind::frequency, "0.3e6 rad/s", {}, "probe window end, offset from omega_q"},
        {"numerics", "probe_points", Kind::count, 901, {}, "probe samples"},
        {"numerics", "beta_min", Kind::number, 0.05, {}, "ratio sweep start"},
        {"numerics", "beta_max", Kind::number, 1.5, {}, "ratio sweep end"},
        {"numerics", "beta_points", Kind::count, 146, {}, "ratio sweep samples"},
        {"numerics", "phi_min", Kind::flux, "1.95 Phi0", {}, "flux sweep start"},
        {"numerics", "phi_max", Kind::flux, "2.0 Phi0", {}, "flux sweep end"},
        {"numerics", "phi_points", Kind::count, 51, {}, "flux sweep samples"},
        {"numerics", "validity_threshold", Kind::number, dispersive::default_validity_threshold, {},
         "dispersive validity threshold on g/|Delta|"},

        {"output", "dir", Kind::text, "qbsim-out", {}, "output directory"},
        {"output", "format", Kind::text, "csv", {"csv", "json"}, "data table format"},
    };
    return specs;
}

double parse_frequency(const json& value, FrequencyConvention convention, const std::string& key) {
    std::string expected = "rad/s";
    for (const auto& u : frequency_units) expected += ", " + std::string(u.name);
    if (!value.is_string())
        throw ValidationError(key + ": frequency needs a unit suffix (" + expected +
                              "), e.g. \"0.1 MHz\" or \"2pi*5 GHz\"");
    static const std::regex re("^\\s*(2\\s*\\*?\\s*pi\\s*\\*\\s*)?" + number_pattern + "\\s*([A-Za-z/]+)\\s*$");
    const std::string text = value.get<std::string>();
    std::smatch m;
    if (!std::regex_match(text, m, re))
        throw ValidationError(key + ": cannot parse \"" + text + "\" as a frequency with unit suffix (" + expected +
                              ")");
    const bool two_pi_prefix = m[1].matched;
    const double x = std::stod(m[2]);
    const std::string unit = m[3];
    if (unit == "rad/s") {
        if (two_pi_prefix) throw ValidationError(key + ": \"2pi*\" cannot be combined with rad/s");
        return x;
    }
    for (const auto& u : frequency_units) {
        if (unit != u.name) continue;
        const bool ordinary = two_pi_prefix || convention == FrequencyConvention::ordinary;
        return (ordinary ? constants::two_pi : 1.0) * x * u.scale;
    }
    throw ValidationError(key + ": unknown frequency unit \"" + unit + "\" (expected " + expected + ")");
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("config " + path + " is not valid JSON: " + e.what());
    }
    if (j.is_object() && j.contains("qbsim_version") && j.contains("config")) return j["config"];
    return j;
}

void apply_override(json& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ValidationError("--set expects key=value, got \"" + assignment + "\"");
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;
    }
    if (!config.is_object()) config = json::object();
    json* node = &config;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ValidationError("--set: malformed key \"" + path + "\"");
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        json& child = (*node)[part];
        if (!child.is_object()) child = json::object();
        node = &child;
        start = dot + 1;
    }
}

Report validate(const json& config, Settings* settings) {
    Report report;
    auto error = [&](std::string m) { report.errors.push_back(std::move(m)); };

    if (!config.is_object()) {
        error("config must be a JSON object");
        return report;
    }
    for (const auto& [key, _] : config.items())
        if (std::find(top_level_keys.begin(), top_level_keys.end(), key) == top_level_keys.end())
            error("unknown top-level key \"" + key + "\"");

    Settings s;
    if (!config.contains("scenario") || !config["scenario"].is_string()) {
        error("scenario missing; expected one of charge, age, ergotropy, ratio-sweep, readout, squid-levels, "
              "flux-sweep, reproduce");
    } else if (const auto sc = parse_scenario(config["scenario"].get<std::string>())) {
        s.scenario = *sc;
    } else {
        error("unknown scenario \"" + config["scenario"].get<std::string>() + "\"");
    }

    if (config.contains("figure")) {
        const auto& f = config["figure"];
        const auto& names = figure_names();
        if (!f.is_string() || (f != "all" && std::find(names.begin(), names.end(), f.get<std::string>()) == names.end()))
            error("figure must be one of fig2a, fig2b, fig3, fig5a, fig5b, all");
        else s.figure = f.get<std::string>();
        if (s.scenario != Scenario::reproduce) error("figure is only meaningful for the reproduce scenario");
    } else if (s.scenario == Scenario::reproduce && report.errors.empty()) {
        error("reproduce needs a figure (fig2a, fig2b, fig3, fig5a, fig5b or all)");
    }

    bool have_convention = false;
    if (!config.contains("frequency_convention")) {
        error(std::string("frequency_convention missing: ") + convention_help);
    } else if (config["frequency_convention"] == "angular") {
        s.convention = FrequencyConvention::angular;
        have_convention = true;
    } else if (config["frequency_convention"] == "ordinary") {
        s.convention = FrequencyConvention::ordinary;
        have_convention = true;
    } else {
        error("frequency_convention \"" + config["frequency_convention"].dump() + "\" not recognised: " +
              convention_help);
    }

    for (const char* section : {"parameters", "numerics", "output"}) {
        if (!config.contains(section)) continue;
        if (!config[section].is_object()) {
            error(std::string(section) + " must be an object");
            continue;
        }
        for (const auto& [key, _] : config[section].items())
            if (!find_spec(section, key)) error("unknown key \"" + std::string(section) + "." + key + "\"");
    }

    std::map<std::string, double> numbers;
    std::map<std::string, std::string> texts;
    for (const auto& spec : schema()) {
        const std::string name = spec.section + "." + spec.key;
        const json* value = &spec.fallback;
        if (config.contains(spec.section) && config[spec.section].is_object() &&
            config[spec.section].contains(spec.key))
            value = &config[spec.section][spec.key];
        try {
            switch (spec.kind) {
            case Kind::frequency:
                if (!have_convention) continue;
                numbers[spec.key] = parse_frequency(*value, s.convention, name);
                break;
            case Kind::flux: numbers[spec.key] = parse_with_units(*value, flux_units, name, "flux"); break;
            case Kind::current: numbers[spec.key] = parse_with_units(*value, current_units, name, "current"); break;
            case Kind::capacitance:
                numbers[spec.key] = parse_with_units(*value, capacitance_units, name, "capacitance");
                break;
            case Kind::number:
                if (!value->is_number()) throw ValidationError(name + ": expected a plain number");
                numbers[spec.key] = value->get<double>();
                break;
            case Kind::count:
                if (!value->is_number_integer() || value->get<std::int64_t>() < 0)
                    throw ValidationError(name + ": expected a non-negative integer");
                numbers[spec.key] = static_cast<double>(value->get<std::int64_t>());
                break;
            case Kind::text:
                if (!value->is_string()) throw ValidationError(name + ": expected a string");
                texts[spec.key] = value->get<std::string>();
                if (!spec.choices.empty() &&
                    std::find(spec.choices.begin(), spec.choices.end(), texts[spec.key]) == spec.choices.end()) {
                    std::string list;
                    for (const auto& c : spec.choices) list += (list.empty() ? "" : ", ") + c;
                    throw ValidationError(name + ": \"" + texts[spec.key] + "\" is not one of " + list);
                }
                break;
            }
            if (spec.kind != Kind::text && !std::isfinite(numbers[spec.key]))
                throw ValidationError(name + ": value must be finite");
        } catch (const ValidationError& e) {
            error(e.what());
        } catch (const std::exception& e) {
            error(name + ": " + e.what());
        }
    }
    if (!report.errors.empty()) return report;

    auto count = [&](const char* k) { return static_cast<std::size_t>(numbers[k]); };
    s.omega_a = numbers["omega_a"];
    s.omega_b = numbers["omega_b"];
    s.omega_q = numbers["omega_q"];
    s.g_a = numbers["g_a"];
    s.g_b = numbers["g_b"];
    s.lambda_ab = numbers["lambda_ab"];
    s.gamma = numbers["gamma"];
    s.line_rate = numbers["line_rate"];
    s.beta = numbers["beta"];
    s.theta_b = numbers["theta_b"];
    s.n_bar = numbers["n_bar"];
    s.critical_current = numbers["critical_current"];
    s.capacitance = numbers["capacitance"];
    s.phi_d = numbers["phi_d"];
    s.phi_a_tilde = numbers["phi_a_tilde"];
    s.phi_b_tilde = numbers["phi_b_tilde"];
    s.flux_convention = texts["flux_convention"] == "bias_only" ? squid::FluxConvention::bias_only
                                                                : squid::FluxConvention::bias_plus_zero_point;
    s.gamma_dt = numbers["gamma_dt"];
    s.gamma_t_end = numbers["gamma_t_end"];
    s.gamma_tau_end = numbers["gamma_tau_end"];
    s.dim = count("dim");
    s.output_stride = count("output_stride");
    s.time_points = count("time_points");
    s.grid_size = count("grid_size");
    s.n_states = count("n_states");
    s.boundary = texts["boundary"] == "periodic" ? squid::Boundary::periodic : squid::Boundary::dirichlet;
    s.probe_min = numbers["probe_min"];
    s.probe_max = numbers["probe_max"];
    s.probe_points = count("probe_points");
    s.beta_min = numbers["beta_min"];
    s.beta_max = numbers["beta_max"];
    s.beta_points = count("beta_points");
    s.phi_min = numbers["phi_min"];
    s.phi_max = numbers["phi_max"];
    s.phi_points = count("phi_points");
    s.validity_threshold = numbers["validity_threshold"];
    s.out_dir = texts["dir"];
    s.format = texts["format"];

    auto require = [&](bool cond, const std::string& message) {
        if (!cond) error(message);
    };
    require(s.omega_a > 0, "parameters.omega_a must be > 0");
    require(s.omega_b > 0, "parameters.omega_b must be > 0");
    require(s.omega_q > 0, "parameters.omega_q must be > 0");
    require(s.gamma > 0, "parameters.gamma must be > 0");
    require(s.line_rate > 0, "parameters.line_rate must be > 0");
    require(s.beta >= 0, "parameters.beta must be >= 0");
    require(s.n_bar >= 0, "parameters.n_bar must be >= 0");
    require(s.critical_current > 0, "parameters.critical_current must be > 0");
    require(s.capacitance > 0, "parameters.capacitance must be > 0");
    require(s.gamma_dt > 0, "numerics.gamma_dt must be > 0");
    require(s.gamma_t_end > 0, "numerics.gamma_t_end must be > 0");
    require(s.gamma_tau_end > 0, "numerics.gamma_tau_end must be > 0");
    require(s.dim == 0 || s.dim >= 2, "numerics.dim must be 0 (automatic) or >= 2");
    require(s.output_stride >= 1, "numerics.output_stride must be >= 1");
    require(s.time_points >= 2, "numerics.time_points must be >= 2");
    require(s.grid_size >= 512, "numerics.grid_size must be >= 512");
    require(s.n_states >= 2 && s.n_states <= s.grid_size, "numerics.n_states must lie in [2, grid_size]");
    require(s.probe_points >= 3, "numerics.probe_points must be >= 3");
    require(s.probe_min < s.probe_max, "numerics.probe_min must be below probe_max");
    require(s.beta_min > 0 && s.beta_min <= s.beta_max, "numerics.beta_min must satisfy 0 < beta_min <= beta_max");
    require(s.beta_points >= 1, "numerics.beta_points must be >= 1");
    require(s.phi_min <= s.phi_max, "numerics.phi_min must not exceed phi_max");
    require(s.phi_points >= 1, "numerics.phi_points must be >= 1");
    require(s.validity_threshold > 0, "numerics.validity_threshold must be > 0");
    require(!s.out_dir.empty(), "output.dir must not be empty");

    if (report.errors.empty()) {
        try {
            const auto d = dispersive::dispersive_map({s.omega_a, s.omega_q, s.omega_b, s.g_a, s.g_b, s.gamma});
            report.derived["delta_a_rad_s"] = d.delta_a;
            report.derived["delta_b_rad_s"] = d.delta_b;
            report.derived["chi_a_rad_s"] = d.chi_a;
            report.derived["chi_b_rad_s"] = d.chi_b;
            report.derived["lambda_ab_from_circuit_rad_s"] = d.lambda_ab;
            report.derived["ratio_a"] = d.ratio_a;
            report.derived["ratio_b"] = d.ratio_b;
            for (const auto& flag : dispersive::validity_check(d, s.validity_threshold).flags) {
                if (flag.ok) continue;
                const std::string label = flag.name == "ratio_a" ? "g_a/|Delta_a|" : "g_b/|Delta_b|";
                report.warnings.push_back(label + " = " + format_number(flag.ratio) +
                                          " is not below the dispersive validity threshold " +
                                          format_number(flag.threshold) + " (" + flag.name + ")");
            }
        } catch (const ValidationError& e) {
            error(e.what());
        }
        squid::SquidParams sp{s.critical_current, s.capacitance, s.phi_d, s.phi_a_tilde, s.phi_b_tilde,
                              s.flux_convention};
        for (auto& w : sp.validate()) report.warnings.push_back("squid: " + w);
    }

    if (report.ok() && settings) *settings = s;
    return report;
}

Settings resolve(const json& config) {
    Settings s;
    const auto report = validate(config, &s);
    if (!report.ok()) {
        std::string message = "invalid config:";
        for (const auto& e : report.errors) message += "\n  " + e;
        throw ValidationError(message);
    }
    return s;
}

json report_to_json(const Report& r) {
    json j;
    j["ok"] = r.ok();
    j["errors"] = r.errors;
    j["warnings"] = r.warnings;
    j["derived"] = r.derived;
    return j;
}

json settings_to_json(const Settings& s) {
    json j;
    j["scenario"] = to_string(s.scenario);
    if (!s.figure.empty()) j["figure"] = s.figure;
    j["frequency_convention"] = s.convention == FrequencyConvention::angular ? "angular" : "ordinary";
    json& p = j["parameters"];
    p["omega_a_rad_s"] = s.omega_a;
    p["omega_b_rad_s"] = s.omega_b;
    p["omega_q_rad_s"] = s.omega_q;
    p["g_a_rad_s"] = s.g_a;
    p["g_b_rad_s"] = s.g_b;
    p["lambda_ab_rad_s"] = s.lambda_ab;
    p["gamma_rad_s"] = s.gamma;
    p["line_rate_rad_s"] = s.line_rate;
    p["beta"] = s.beta;
    p["theta_b_rad"] = s.theta_b;
    p["n_bar"] = s.n_bar;
    p["critical_current_A"] = s.critical_current;
    p["capacitance_F"] = s.capacitance;
    p["phi_d_Phi0"] = s.phi_d;
    p["phi_a_tilde_Phi0"] = s.phi_a_tilde;
    p["phi_b_tilde_Phi0"] = s.phi_b_tilde;
    p["flux_convention"] = s.flux_convention == squid::FluxConvention::bias_only ? "bias_only" : "bias_plus_zero_point";
    json& n = j["numerics"];
    n["gamma_dt"] = s.gamma_dt;
    n["gamma_t_end"] = s.gamma_t_end;
    n["gamma_tau_end"] = s.gamma_tau_end;
    n["dim"] = s.dim;
    n["output_stride"] = s.output_stride;
    n["time_points"] = s.time_points;
    n["grid_size"] = s.grid_size;
    n["n_states"] = s.n_states;
    n["boundary"] = s.boundary == squid::Boundary::periodic ? "periodic" : "dirichlet";
    n["probe_min_rad_s"] = s.probe_min;
    n["probe_max_rad_s"] = s.probe_max;
    n["probe_points"] = s.probe_points;
    n["beta_min"] = s.beta_min;
    n["beta_max"] = s.beta_max;
    n["beta_points"] = s.beta_points;
    n["phi_min_Phi0"] = s.phi_min;
    n["phi_max_Phi0"] = s.phi_max;
    n["phi_points"] = s.phi_points;
    n["validity_threshold"] = s.validity_threshold;
    return j;
}

std::string config_hash(const json& config) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : config.dump()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace qbsim::cli
