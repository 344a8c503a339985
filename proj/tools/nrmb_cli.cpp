#include "commands.hpp"

#include "nrmb/csv.hpp"
#include "nrmb/liouvillian.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace nrmb::cli;

void add_common(CLI::App* app, Common& c) {
    app->add_option("-c,--config", c.config_path, "Run configuration file");
    app->add_flag("--explain", c.explain, "Print how every setting was resolved (stderr)");
    app->add_option("-j,--threads", c.threads, "Worker threads (overrides SIM_THREADS)")->check(CLI::NonNegativeNumber);
}

void add_overrides(CLI::App* app, Overrides& o) {
    app->add_option("--delta", o.delta, "Detuning omega_b - omega_d");
    app->add_option("--gamma", o.gamma_diss, "Dissipative coupling (sets tau = gamma/(mu nu))");
    app->add_option("--tau", o.tau, "Waveguide coupling tau");
    app->add_option("--theta", o.theta, "Port phase");
    app->add_option("--n-fock", o.n_fock, "Magnon Fock truncation");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nrmb: nonreciprocal magnon blockade simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", nrmb::kToolVersion);

    Common common;
    Overrides over;

    auto* solve = app.add_subcommand("solve", "Steady-state g2(0) at one parameter point (JSON)");
    add_common(solve, common);
    add_overrides(solve, over);
    std::string direction = "theta";
    solve->add_option("--direction", direction, "forward, backward, both, or theta (use the configured phase)")
        ->check(CLI::IsMember({"forward", "backward", "both", "theta"}));

    auto* sweep = app.add_subcommand("sweep", "Run the sweep described by a config file (CSV)");
    add_common(sweep, common);
    std::string output;
    sweep->add_option("-o,--output", output, "Output CSV (default: [output] path, else stdout)");

    auto* spectra = app.add_subcommand("spectra", "Dressed-state eigenvalues (CSV)");
    add_common(spectra, common);
    add_overrides(spectra, over);
    int n_max = 1;
    std::string gamma_grid;
    bool hermitian = false;
    spectra->add_option("--n", n_max, "Highest excitation number");
    spectra->add_option("--gamma-grid", gamma_grid, "Gamma grid, 'a,b,c' or 'start:stop:count' (both phases)");
    spectra->add_flag("--hermitian", hermitian, "Print the Hermitian ladder instead");
    spectra->add_option("-o,--output", output, "Output CSV (default stdout)");

    auto* cmax = app.add_subcommand("cmax", "Maximal bidirectional contrast per Gamma (CSV)");
    add_common(cmax, common);
    std::string cmax_grid = "1:10:10";
    double delta_lo = -30.0;
    double delta_hi = 30.0;
    std::size_t coarse = 241;
    double refine_tol = 0.05;
    cmax->add_option("--gammas", cmax_grid, "Gamma grid, 'a,b,c' or 'start:stop:count'");
    cmax->add_option("--delta-lo", delta_lo);
    cmax->add_option("--delta-hi", delta_hi);
    cmax->add_option("--coarse", coarse, "Coarse detuning points");
    cmax->add_option("--refine-tol", refine_tol, "Golden-section bracket tolerance");
    cmax->add_option("-o,--output", output, "Output CSV (default stdout)");

    auto* figure = app.add_subcommand("figure", "Run a figure preset");
    add_common(figure, common);
    std::string figure_name;
    std::string out_dir = ".";
    figure->add_option("name", figure_name, "2a, 2b, 2c, 3a, 3b, 4 or 5")->required();
    figure->add_option("-d,--out-dir", out_dir, "Directory for the CSV files");

    auto* validate = app.add_subcommand("validate", "Run the invariant self-check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    try {
        if (*solve) return cmd_solve(common, over, direction, std::cout, std::cerr);
        if (*sweep) return cmd_sweep(common, output, std::cout, std::cerr);
        if (*spectra) return cmd_spectra(common, over, n_max, gamma_grid, hermitian, output, std::cout, std::cerr);
        if (*cmax) {
            return cmd_cmax(common, cmax_grid, delta_lo, delta_hi, coarse, refine_tol, output, std::cout, std::cerr);
        }
        if (*figure) return cmd_figure(common, figure_name, out_dir, std::cout, std::cerr);
        if (*validate) return cmd_validate(std::cout);
    } catch (const nrmb::ConfigError& e) {
        std::cerr << "nrmb: config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const nrmb::SolverError& e) {
        std::cerr << "nrmb: solver failure: " << e.what() << "\n";
        return kSolverFailure;
    } catch (const nrmb::IoError& e) {
        std::cerr << "nrmb: " << e.what() << "\n";
        return kSolverFailure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "nrmb: invalid parameters: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "nrmb: " << e.what() << "\n";
        return kSolverFailure;
    }
    return kOk;
}
