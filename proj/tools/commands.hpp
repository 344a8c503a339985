// commands.hpp — subcommand implementations behind the nrmb CLI.

#pragma once

#include "nrmb/config.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace nrmb::cli {

enum ExitCode { kOk = 0, kSolverFailure = 1, kConfigError = 2 };

struct Common {
    std::string config_path;
    bool explain = false;
    std::optional<int> threads;
};

struct Overrides {
    std::optional<double> delta;
    std::optional<double> gamma_diss;
    std::optional<double> tau;
    std::optional<double> theta;
    std::optional<std::size_t> n_fock;
};

// Config file (or defaults), then SIM_THREADS, then explicit overrides.
RunConfig resolve(const Common& common, const Overrides& over, std::ostream& err);
int resolved_threads(const Common& common, const RunConfig& cfg);

int cmd_solve(const Common& common, const Overrides& over, const std::string& direction, std::ostream& out,
              std::ostream& err);
int cmd_sweep(const Common& common, const std::string& output, std::ostream& out, std::ostream& err);
int cmd_spectra(const Common& common, const Overrides& over, int n_max, const std::string& gamma_grid,
                bool hermitian, const std::string& output, std::ostream& out, std::ostream& err);
int cmd_cmax(const Common& common, const std::string& gamma_grid, double delta_lo, double delta_hi,
             std::size_t coarse, double refine_tol, const std::string& output, std::ostream& out,
             std::ostream& err);
int cmd_figure(const Common& common, const std::string& name, const std::string& out_dir, std::ostream& out,
               std::ostream& err);
int cmd_validate(std::ostream& out);

// "1,2,5" or "start:stop:count".
std::vector<double> parse_grid(const std::string& text);

}  // namespace nrmb::cli
