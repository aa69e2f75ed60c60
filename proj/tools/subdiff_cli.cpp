#include "subdiff/subdiff.h"

#include <CLI11.hpp>

#include <cstdio>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"Subordinated diffusion experiments: kernels, densities, solutions, Cesaro means"};
    app.set_version_flag("--version", std::string(subdiff_version()));
    app.require_subcommand(1);

    struct Args {
        std::string config;
        std::string out;
    };
    Args args;
    const char* commands[][2] = {
        {"kernel-eval", "Tabulate K, Phi and the regular-variation data on the lambda grid"},
        {"density", "Density of the inverse subordinator on the (t, tau) grid, with normalization"},
        {"solve", "Solution v(x, t) on the x and t grids, and its time L1 norm"},
        {"cesaro", "Cesaro mean of the subordinated solution on the t grid"},
        {"verify", "Fit the long-time behaviour and compare it with the predicted asymptote"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", args.config, "Experiment configuration file")->required();
        sub->add_option("--out", args.out, "Output directory")->required();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    const subdiff_status st = subdiff_cmd_run(command.c_str(), args.config.c_str(), args.out.c_str());
    std::fputs(subdiff_last_summary(), stdout);
    if (st != SUBDIFF_OK) std::fprintf(stderr, "subdiff %s: %s: %s\n", command.c_str(), subdiff_status_name(st),
                                       subdiff_last_error());
    return subdiff_exit_code(st);
}
