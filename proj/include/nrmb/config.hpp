// config.hpp — run configuration files.
//
// Flat sectioned key-value documents:
//
//   [system]   omega_q omega_b delta|omega_d lambda gamma_in kappa_in
//              tau|gamma_diss mu nu theta phi xi|magnon_rabi drive
//   [cavity]   omega_c|cavity_detuning beta_in zeta   (presence enables the three-mode model)
//   [sweep]    axis1 axis2 directions
//   [solver]   n_fock n_fock_c residual_tol kernel_ratio check_kernel method threads
//   [output]   path
//
// Values are numbers (the literal `pi` and `-pi` are accepted), booleans, or
// strings, optionally double-quoted. Axes are written "name:start:stop:count";
// directions as "forward", "backward" or "forward,backward". All frequencies
// are in 2π·MHz, i.e. exactly as quoted for ω/2π in MHz.

#pragma once

#include "nrmb/liouvillian.hpp"
#include "nrmb/model.hpp"
#include "nrmb/sweep.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nrmb {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& key_path, int line, const std::string& message);

    const std::string& key_path() const noexcept { return key_path_; }
    int line() const noexcept { return line_; }

private:
    std::string key_path_;
    int line_;
};

struct RunConfig {
    SystemParams system;
    std::optional<CavityParams> cavity;
    std::optional<double> magnon_rabi = 0.1;  // empty when xi is given explicitly
    std::vector<Axis> axes;
    std::vector<Direction> directions{Direction::forward, Direction::backward};
    SolverOptions solver;
    SolveMethod method = SolveMethod::trace_replacement;
    int threads = 0;
    std::string output;

    // "section.key = value  (default|line N)" for every resolved setting.
    std::vector<std::string> explain;

    SweepSpec sweep_spec() const;

    bool operator==(const RunConfig& rhs) const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Inverse of parse_config for resolved configs (explain trace not included).
std::string serialize_config(const RunConfig& cfg);

// Threads from SIM_THREADS when set and valid, otherwise `fallback`.
int threads_from_env(int fallback);

}  // namespace nrmb
