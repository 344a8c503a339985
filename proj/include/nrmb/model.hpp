// model.hpp — rotating-frame Lindblad models for the driven qubit–magnon
// system, its cavity–waveguide extension, and the dispersive reduction of the
// bare qubit–cavity–magnon Hamiltonian.

#pragma once

#include "nrmb/hilbert.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace nrmb {

inline constexpr double kPi = 3.14159265358979323846;

// How the waveguide drive is distributed over qubit and magnon.
//
// port:   H_d = sqrt(tau)·xi·(o + o^dag) with o the collective jump operator,
//         so xi_q = sqrt(gamma_ex)·xi, xi_b = sqrt(kappa_ex)·xi and the magnon
//         term carries the port phase Theta (plus phi).
// direct: xi_q = nu·xi, xi_b = mu·xi with no Theta dependence. Used for the
//         tau = 0 reference, where the waveguide (and with it the port) is absent.
enum class DriveMode { port, direct };

std::string to_string(DriveMode mode);
DriveMode drive_mode_from_string(const std::string& name);

struct SystemParams {
    double omega_q = 5000.0;
    double omega_b = 5000.0;
    double omega_d = 5000.0;
    double lambda = 10.0;
    double gamma_in = 1.0;
    double kappa_in = 1.0;
    double tau = 5.0;
    double mu = 1.0;
    double nu = 1.0;
    double theta = 0.0;
    double phi = 0.0;
    double xi = 0.1 / std::sqrt(5.0);  // magnon Rabi amplitude 0.1 at tau = 5
    DriveMode drive = DriveMode::port;
    std::size_t n_fock = 7;

    double gamma_ex() const noexcept { return tau * nu * nu; }
    double kappa_ex() const noexcept { return tau * mu * mu; }
    // Dissipative coupling Gamma = tau·mu·nu = sqrt(kappa_ex·gamma_ex).
    double gamma_diss() const noexcept { return tau * mu * nu; }
    double gamma_total() const noexcept { return gamma_in + gamma_ex(); }
    double kappa_total() const noexcept { return kappa_in + kappa_ex(); }
    double xi_q() const noexcept;
    double xi_b() const noexcept;

    // Delta = omega_b - omega_d.
    double detuning() const noexcept { return omega_b - omega_d; }
    void set_detuning(double delta) noexcept { omega_d = omega_b - delta; }

    // Sets tau = Gamma/(mu·nu); with mu = nu = 1 this is the tau = Gamma tie.
    void set_gamma_diss(double gamma);

    // Chooses xi so that the magnon Rabi amplitude xi_b equals `rabi`. In port
    // mode with kappa_ex = 0 there is no waveguide drive to scale, so the
    // drive falls back to direct mode.
    void set_magnon_rabi(double rabi);

    // Throws std::invalid_argument on the first violated constraint.
    void validate() const;

    bool operator==(const SystemParams&) const = default;
};

struct CavityParams {
    double omega_c = 6000.0;
    double beta_in = 1.0;
    double zeta = 1.0;
    std::size_t n_fock_c = 4;

    double beta_ex(double tau) const noexcept { return tau * zeta * zeta; }
    void validate() const;

    bool operator==(const CavityParams&) const = default;
};

struct Channel {
    double rate = 0.0;
    QuantumOperator jump;
    std::string label;
};

struct LindbladModel {
    QuantumOperator hamiltonian;  // rotating frame, drive included
    QuantumOperator drive;        // drive part of `hamiltonian`
    std::vector<Channel> channels;
    Dims dims;

    std::size_t dim() const noexcept { return dims_product(dims); }
};

// Fig. 2 caption defaults at the given detuning, dissipative coupling and port
// phase, with magnon Rabi amplitude 0.1.
SystemParams fig2_params(double delta, double gamma_diss, double theta);

LindbladModel build_two_mode(const SystemParams& params);
LindbladModel build_three_mode(const SystemParams& params, const CavityParams& cavity);

// Undriven, lab-frame non-Hermitian Hamiltonian of the qubit–magnon system:
// H - i·gamma·σ+σ- - i·kappa·b†b - i·Gamma(e^{iΘ}σ+ b + e^{-iΘ} b† σ-).
QuantumOperator effective_hamiltonian(const SystemParams& params);

// H - i Σ_k r_k f_k† f_k for an arbitrary model (drive included if present).
QuantumOperator no_jump_hamiltonian(const LindbladModel& model);

struct BareParams {
    double omega_q0 = 0.0;
    double omega_b0 = 0.0;
    double omega_c = 0.0;
    double lambda_q = 0.0;
    double lambda_b = 0.0;

    double delta_q() const noexcept { return omega_q0 - omega_c; }
    double delta_b() const noexcept { return omega_b0 - omega_c; }
    // max(|lambda_q/delta_q|, |lambda_b/delta_b|)
    double dispersive_ratio() const noexcept;
    bool is_dispersive(double threshold = 0.1) const noexcept { return dispersive_ratio() < threshold; }
};

struct ReducedParams {
    double omega_q = 0.0;
    double omega_b = 0.0;
    double lambda = 0.0;
};

ReducedParams reduce_bare_params(const BareParams& bare);

enum class ResidualScope { interior, full };

// max-norm of H_I + [H_0, V] on qubit ⊗ magnon ⊗ cavity, both bosonic modes
// truncated to n_fock levels. `interior` drops basis states that occupy the
// top Fock level of either mode.
double frohlich_residual(const BareParams& bare, std::size_t n_fock, ResidualScope scope = ResidualScope::interior);

// max-norm of H_0 + ½[H_I, V] minus the reduced Hamiltonian
// ω_q σ+σ- + ω_b b†b + λ(b†σ- + bσ+) + (ω_c - λ_b²/δ_b + (λ_q²/δ_q)σ_z) c†c.
// Unlike frohlich_residual this involves products of ladder operators, so the
// top truncated level contributes an O(λ²/δ · N) artifact in `full` scope.
double second_order_residual(const BareParams& bare, std::size_t n_fock,
                             ResidualScope scope = ResidualScope::interior);

}  // namespace nrmb
