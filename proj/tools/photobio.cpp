#include <CLI11.hpp>

#include <iostream>

#include "photobio/error.hpp"
#include "photobio/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Phototactic bioconvection: basic state, onset, and nonlinear runs"};
    app.require_subcommand(1, 1);

    photobio::PipelineOptions options;
    std::string config;
    std::string out = ".";
    std::vector<double> r_mult;
    std::vector<std::string> overrides;

    for (const char* name : {"basic", "onset", "simulate", "sweep"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config, "key = value configuration file")->required();
        sub->add_option("--out", out, "output directory");
        sub->add_option("--r-mult", r_mult, "Rayleigh number as a multiple of R_c");
        sub->add_option("--override", overrides, "key=val applied over the file");
    }
    CLI11_PARSE(app, argc, argv);

    options.mode = photobio::parse_mode(app.get_subcommands().front()->get_name());
    options.config = config;
    options.out = out;
    options.r_mult = r_mult;
    options.overrides = overrides;
    return photobio::run_pipeline(options, std::cout, std::cerr);
}
