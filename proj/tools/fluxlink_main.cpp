#include "fluxlink/app.hpp"
#include "fluxlink/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <utility>

using namespace fluxlink;

int main(int argc, char** argv) {
    CLI::App app{"fluxlink: superconducting-circuit quantum link model toolkit"};
    app.require_subcommand(1, 1);

    std::string config_path, out_dir, string_convention, units;
    bool parallel = false, unsigned_gauss = false;

    const std::pair<const char*, const char*> commands[] = {
        {"device-spectrum", "fluxonium levels of the link and ancilla devices"},
        {"couplings", "U, V, J, Delta and the drive optimum for the configured network"},
        {"sweep", "ground-state sweep of one Hamiltonian over a control parameter"},
        {"observe", "ground-state observables and a state dump at one point"},
        {"readout-fidelity", "fidelity bounds of the measurement protocols"},
        {"protocol-sim", "simulated Wilson and 't Hooft measurements against direct expectations"},
        {"dump-geometry", "links, vertices, plaquettes and paths of the lattice"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "INI configuration file");
        sub->add_option("--out", out_dir, "output directory (overrides [output] dir)");
        sub->add_flag("--parallel", parallel, "solve sweep points concurrently (no warm starts)");
        sub->add_flag("--unsigned-gauss", unsigned_gauss, "use the unsigned Gauss convention");
        sub->add_option("--string-convention", string_convention, "'t Hooft string signs")
            ->check(CLI::IsMember({"uniform", "alternating"}));
        sub->add_option("--units", units, "eaj or ghz:<E_J^a in GHz>");
    }
    CLI11_PARSE(app, argc, argv);

    const std::string cmd_name = app.get_subcommands().front()->get_name();
    try {
        cli::RunConfig cfg = config_path.empty() ? cli::parse_config("") : cli::load_config(config_path);
        if (!out_dir.empty()) cfg.output.dir = out_dir;
        if (unsigned_gauss) cfg.convention = model::Convention::unsigned_gauss;
        if (!string_convention.empty()) cfg.string_convention = lattice::parse_convention(string_convention);
        if (!units.empty()) cfg.units = cli::parse_units(units);

        const auto bundle = cli::run(cli::parse_command(cmd_name), cfg, {parallel});
        cli::write_bundle(bundle, cfg.output.dir, cfg.output.prefix);
        for (const auto& n : bundle.notices) std::cerr << "notice: " << n << "\n";
        for (const auto& [name, content] : bundle.files) std::cout << cfg.output.dir << "/" << name << "\n";
        std::cout << cfg.output.dir << "/" << cfg.output.prefix << "_meta.json\n";
    } catch (const ConfigError& e) {
        std::cerr << "fluxlink " << cmd_name << ": config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "fluxlink " << cmd_name << ": error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
