#include "translume/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    namespace cli = translume::cli;
    CLI::App app{"Transmission and vacuum emission of transluminal space-time gratings", "translume"};
    app.set_version_flag("--version", std::string("translume ") + cli::version());

    cli::Invocation inv;
    std::string config;
    app.add_option("command", inv.command, "rays | spectrum | vacuum | stimulated | sweep")
        ->required()
        ->check(CLI::IsMember({"rays", "spectrum", "vacuum", "stimulated", "sweep"}));
    app.add_option("--config", config, "run configuration file")->required();
    app.add_option("--out", inv.out_dir, "output directory (overrides [output] dir)");
    app.add_option("--format", inv.format, "csv or json (overrides [output] format)")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--engine", inv.engine, "analytic or floquet (overrides [stimulated] engine)")
        ->check(CLI::IsMember({"analytic", "floquet"}));
    app.add_option("--workers", inv.workers, "worker threads; TRANSLUME_WORKERS takes precedence")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    inv.config = config;
    return cli::run(inv, std::cout, std::cerr);
}
