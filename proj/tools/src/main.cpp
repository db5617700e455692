#include "config.hpp"
#include "runner.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"SINR/SIR outage probability of a CoMP cellular downlink"};
    app.require_subcommand(1);

    std::string run_path, cum_path;
    auto* run = app.add_subcommand("run", "evaluate the configured methods over the sweep and print CSV");
    run->add_option("config", run_path, "configuration file")->required();
    auto* cum = app.add_subcommand("cumulants", "print cumulants of Omega over the sweep as CSV");
    cum->add_option("config", cum_path, "configuration file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    using namespace outage::cli;
    const std::string& path = run->parsed() ? run_path : cum_path;
    RunConfig cfg;
    try {
        cfg = load_config(path);
    } catch (const ConfigError& e) {
        std::cerr << path << ":" << e.line() << ":" << e.column() << ": " << e.what() << "\n";
        return 1;
    }

    if (cum->parsed()) {
        try {
            write_cumulants(cfg, std::cout);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
        return 0;
    }

    const auto cells = run_cells(cfg, std::cerr);
    write_csv(cells, std::cout);
    for (const auto& c : cells) {
        if (c.p_out) return 0;
    }
    return 2;
}
