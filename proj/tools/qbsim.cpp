// qbsim: command-line front end for the battery simulator.
//
//   qbsim validate CONFIG [--set key=value ...]
//   qbsim run CONFIG [--set ...] [--out DIR]
//   qbsim SCENARIO [CONFIG] [--set ...] [--out DIR]
//   qbsim reproduce FIGURE [CONFIG] [--set ...] [--out DIR]
//
// Exit status: 0 success, 2 validation failure, 3 runtime invariant violation.

#include "CLI11.hpp"
#include "qbsim/cli/app.hpp"
#include "qbsim/cli/config.hpp"
#include "qbsim/version.hpp"

#include <iostream>

int main(int argc, char** argv) {
    using namespace qbsim::cli;

    CLI::App app{"Switchable coherent-state quantum battery simulator"};
    app.set_version_flag("--version", std::string(qbsim::version));
    app.require_subcommand(1);

    Request request;
    auto common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("config", request.config_path, "JSON config, or a run manifest");
        if (config_required) opt->required();
        opt->check(CLI::ExistingFile);
        sub->add_option("--set", request.overrides, "override a config key: section.key=value")
            ->allow_extra_args(false);
    };

    auto* validate_cmd = app.add_subcommand("validate", "check a config without running it");
    common(validate_cmd, true);

    auto* run_cmd = app.add_subcommand("run", "run the scenario named in a config or manifest");
    common(run_cmd, true);
    run_cmd->add_option("--out", request.out_dir, "output directory (overrides output.dir)");

    for (const auto& name : scenario_names()) {
        if (name == "reproduce") continue;
        auto* sub = app.add_subcommand(name, "run the " + name + " scenario");
        common(sub, false);
        sub->add_option("--out", request.out_dir, "output directory (overrides output.dir)");
    }

    auto* reproduce = app.add_subcommand("reproduce", "regenerate a figure data set");
    std::vector<std::string> figures = figure_names();
    figures.push_back("all");
    reproduce->add_option("figure", request.figure, "fig2a, fig2b, fig3, fig5a, fig5b or all")
        ->required()
        ->check(CLI::IsMember(figures));
    common(reproduce, false);
    reproduce->add_option("--out", request.out_dir, "output directory (overrides output.dir)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_validation;
    }

    request.command = app.get_subcommands().front()->get_name();
    return execute(request, std::cout, std::cerr);
}
