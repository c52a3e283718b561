#include "qbsim/cli/app.hpp"

#include "qbsim/cli/config.hpp"
#include "qbsim/cli/scenarios.hpp"
#include "qbsim/errors.hpp"

#include <ostream>

namespace qbsim::cli {

namespace {

json build_config(const Request& r) {
    json config = r.config_path.empty() ? json{{"frequency_convention", "angular"}} : load_config(r.config_path);
    if (!config.is_object()) throw ValidationError("config must be a JSON object");
    if (r.command != "validate" && r.command != "run") {
        config["scenario"] = r.command;
        if (r.command == "reproduce") config["figure"] = r.figure;
        else config.erase("figure");
    }
    for (const auto& o : r.overrides) apply_override(config, o);
    return config;
}

} // namespace

int execute(const Request& request, std::ostream& out, std::ostream& err) {
    try {
        if (request.command == "validate" && request.config_path.empty())
            throw ValidationError("validate needs a config path");
        if (request.command == "run" && request.config_path.empty()) throw ValidationError("run needs a config path");

        const json config = build_config(request);
        Settings settings;
        const Report report = validate(config, &settings);

        if (request.command == "validate") {
            out << report_to_json(report).dump(2) << '\n';
            return report.ok() ? exit_ok : exit_validation;
        }
        if (!report.ok()) {
            err << "qbsim: invalid config\n";
            for (const auto& e : report.errors) err << "  error: " << e << '\n';
            return exit_validation;
        }
        for (const auto& w : report.warnings) err << "qbsim: warning: " << w << '\n';

        const std::string dir = request.out_dir.empty() ? settings.out_dir : request.out_dir;
        for (const auto& artifact : run_scenario(settings)) {
            for (const auto& d : artifact.diagnostics) err << "qbsim: " << artifact.name << ": " << d << '\n';
            const auto written = write_artifact(artifact, settings, config, report, dir);
            out << written.table_path << '\n' << written.manifest_path << '\n';
        }
        return exit_ok;
    } catch (const InvariantViolation& e) {
        err << "qbsim: invariant violated: " << e.what() << '\n';
        return exit_invariant;
    } catch (const ValidationError& e) {
        err << "qbsim: " << e.what() << '\n';
        return exit_validation;
    } catch (const std::exception& e) {
        err << "qbsim: " << e.what() << '\n';
        return exit_failure;
    }
}

} // namespace qbsim::cli
