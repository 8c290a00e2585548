// openrabi: spectra, dynamics, and steady states of the quantum Rabi model
// with two-photon relaxation, in the number-parity basis.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical-invariant failure.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "openrabi/commands.hpp"
#include "openrabi/lindblad.hpp"
#include "openrabi/ode.hpp"

namespace {

void add_common_options(CLI::App* sub, openrabi::RunConfig& cfg, std::string& init_spec) {
    sub->add_option("--nu-c", cfg.nu_c, "Cavity frequency (frequency unit)")->capture_default_str();
    sub->add_option("--nu-q", cfg.nu_q, "Qubit frequency in units of nu_c")->capture_default_str();
    sub->add_option("--kappa2", cfg.kappa_c2, "Two-photon relaxation rate in units of nu_c")->capture_default_str();
    sub->add_option("--g-start", cfg.g_start, "First coupling value")->capture_default_str();
    sub->add_option("--g-stop", cfg.g_stop, "Last coupling value")->capture_default_str();
    sub->add_option("--g-steps", cfg.g_steps, "Number of coupling grid points")->capture_default_str();
    sub->add_option("--cutoff", cfg.cutoff, "Boson cutoff n_max (-1 = subcommand default)")->capture_default_str();
    sub->add_option("--levels", cfg.levels, "Tracked labels per parity")->capture_default_str();
    sub->add_option("--init", init_spec, "Initial bare state, e.g. \"2,g\" or \"3,g\"");
    sub->add_option("--t-max", cfg.t_max, "Time horizon in units of T_c/2 = pi/(2 nu_c)")->capture_default_str();
    sub->add_option("--t-steps", cfg.t_steps, "Number of time intervals")->capture_default_str();
    sub->add_option("--out", cfg.out_path, "Output path (default: stdout)");
    sub->add_option("--format", cfg.format, "Output format: csv or json")->capture_default_str();
    sub->add_option("--parity", cfg.parity, "Parity sectors: +, - or both")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "Worker threads (0 = hardware; OPENRABI_THREADS caps)")
        ->capture_default_str();
    sub->add_flag("--skip-convergence-check",
                  [&cfg](std::int64_t) { cfg.convergence_check = false; },
                  "Skip the raised-cutoff re-run of dynamics observables");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum Rabi model with two-photon relaxation (number-parity basis)"};
    app.require_subcommand(1);

    openrabi::RunConfig cfg;
    std::string init_spec;
    const std::pair<const char*, const char*> subs[] = {
        {"spectrum", "Closed and open eigenfrequency sweep over g (Fig. 2 pipeline)"},
        {"dynamics", "Lindblad time evolution over a (g, t) grid (Figs. 3a-b/4a-b)"},
        {"steady", "Steady-state observables over g (Figs. 3d/4d)"},
        {"modemap", "Eigenmode weights of the initial bare state over g (Figs. 3c/4c)"},
        {"jc", "Jaynes-Cummings closed forms vs tracked Rabi branches"},
        {"fullcmp", "Full vs phenomenological doubled-space spectra per parity subspace"},
    };
    for (const auto& [name, desc] : subs) add_common_options(app.add_subcommand(name, desc), cfg, init_spec);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        cfg.subcommand = app.get_subcommands().front()->get_name();
        if (!init_spec.empty()) openrabi::parse_init_spec(init_spec, cfg);
        cfg.validate();

        if (cfg.out_path.empty()) {
            openrabi::run_command(cfg, std::cout);
        } else {
            std::ofstream out(cfg.out_path);
            if (!out) throw openrabi::ConfigError("cannot open output path '" + cfg.out_path + "'");
            openrabi::run_command(cfg, out);
        }
    } catch (const openrabi::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const openrabi::InvariantViolation& e) {
        std::cerr << "numerical invariant failure: " << e.what() << "\n";
        return 3;
    } catch (const openrabi::StepSizeUnderflow& e) {
        std::cerr << "numerical invariant failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
