#include "nrmb/model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

namespace nrmb {

std::string to_string(DriveMode mode) { return mode == DriveMode::port ? "port" : "direct"; }

DriveMode drive_mode_from_string(const std::string& name) {
    if (name == "port") return DriveMode::port;
    if (name == "direct") return DriveMode::direct;
    throw std::invalid_argument("unknown drive mode '" + name + "' (expected port or direct)");
}

double SystemParams::xi_q() const noexcept {
    return drive == DriveMode::port ? std::sqrt(gamma_ex()) * xi : nu * xi;
}

double SystemParams::xi_b() const noexcept {
    return drive == DriveMode::port ? std::sqrt(kappa_ex()) * xi : mu * xi;
}

void SystemParams::set_gamma_diss(double gamma) {
    if (gamma < 0.0) throw std::invalid_argument("gamma_diss must be nonnegative");
    if (mu * nu == 0.0) throw std::invalid_argument("set_gamma_diss: mu·nu must be nonzero");
    tau = gamma / (mu * nu);
}

void SystemParams::set_magnon_rabi(double rabi) {
    if (rabi < 0.0) throw std::invalid_argument("magnon Rabi amplitude must be nonnegative");
    if (mu == 0.0) throw std::invalid_argument("set_magnon_rabi: mu must be nonzero");
    if (drive == DriveMode::port && kappa_ex() == 0.0) drive = DriveMode::direct;
    xi = drive == DriveMode::port ? rabi / std::sqrt(kappa_ex()) : rabi / mu;
}

void SystemParams::validate() const {
    auto nonneg = [](double v, const char* name) {
        if (!(v >= 0.0)) throw std::invalid_argument(std::string(name) + " must be nonnegative");
    };
    nonneg(gamma_in, "gamma_in");
    nonneg(kappa_in, "kappa_in");
    nonneg(tau, "tau");
    nonneg(mu, "mu");
    nonneg(nu, "nu");
    for (double v : {omega_q, omega_b, omega_d, lambda, theta, phi, xi}) {
        if (!std::isfinite(v)) throw std::invalid_argument("system parameters must be finite");
    }
    if (n_fock < 3) throw std::invalid_argument("n_fock must be at least 3");
}

void CavityParams::validate() const {
    if (!(beta_in >= 0.0)) throw std::invalid_argument("beta_in must be nonnegative");
    if (!(zeta >= 0.0)) throw std::invalid_argument("zeta must be nonnegative");
    if (!std::isfinite(omega_c)) throw std::invalid_argument("omega_c must be finite");
    if (n_fock_c < 2) throw std::invalid_argument("n_fock_c must be at least 2");
}

SystemParams fig2_params(double delta, double gamma_diss, double theta) {
    SystemParams p;
    p.theta = theta;
    p.set_detuning(delta);
    p.set_gamma_diss(gamma_diss);
    p.set_magnon_rabi(0.1);
    return p;
}

namespace {

struct ModeOperators {
    QuantumOperator sm;  // qubit lowering
    QuantumOperator b;   // magnon annihilation
    QuantumOperator c;   // cavity annihilation (three-mode only)
};

ModeOperators mode_operators(const Dims& dims) {
    ModeOperators ops;
    ops.sm = embed(sigma_minus(), 0, dims);
    ops.b = embed(annihilation(dims[1]), 1, dims);
    if (dims.size() > 2) ops.c = embed(annihilation(dims[2]), 2, dims);
    return ops;
}

QuantumOperator drive_term(const SystemParams& p, const ModeOperators& ops) {
    const double magnon_phase = p.phi + (p.drive == DriveMode::port ? p.theta : 0.0);
    const Complex e = std::polar(1.0, magnon_phase);
    const auto sp = ops.sm.adjoint();
    const auto bd = ops.b.adjoint();
    return Complex(p.xi_q()) * (ops.sm + sp) + Complex(p.xi_b()) * (e * ops.b + std::conj(e) * bd);
}

// Rotating-frame qubit–magnon Hamiltonian without drive.
QuantumOperator jc_hamiltonian(const SystemParams& p, const ModeOperators& ops) {
    const auto sp = ops.sm.adjoint();
    const auto bd = ops.b.adjoint();
    return Complex(p.omega_q - p.omega_d) * (sp * ops.sm) + Complex(p.omega_b - p.omega_d) * (bd * ops.b) +
           Complex(p.lambda) * (bd * ops.sm + ops.b * sp);
}

QuantumOperator collective_jump(const SystemParams& p, const ModeOperators& ops) {
    return std::polar(p.mu, p.theta) * ops.b + Complex(p.nu) * ops.sm;
}

}  // namespace

LindbladModel build_two_mode(const SystemParams& params) {
    params.validate();
    LindbladModel m;
    m.dims = {2, params.n_fock};
    const auto ops = mode_operators(m.dims);
    m.drive = drive_term(params, ops);
    m.hamiltonian = jc_hamiltonian(params, ops) + m.drive;
    m.channels = {
        {params.gamma_in, ops.sm, "qubit"},
        {params.kappa_in, ops.b, "magnon"},
        {params.tau, collective_jump(params, ops), "collective"},
    };
    return m;
}

LindbladModel build_three_mode(const SystemParams& params, const CavityParams& cavity) {
    params.validate();
    cavity.validate();
    LindbladModel m;
    m.dims = {2, params.n_fock, cavity.n_fock_c};
    const auto ops = mode_operators(m.dims);
    m.drive = drive_term(params, ops);
    m.hamiltonian = jc_hamiltonian(params, ops) + Complex(cavity.omega_c - params.omega_d) * (ops.c.adjoint() * ops.c) +
                    m.drive;
    m.channels = {
        {params.gamma_in, ops.sm, "qubit"},
        {params.kappa_in, ops.b, "magnon"},
        {cavity.beta_in, ops.c, "cavity"},
        {params.tau, collective_jump(params, ops) + Complex(cavity.zeta) * ops.c, "collective"},
    };
    return m;
}

QuantumOperator effective_hamiltonian(const SystemParams& params) {
    params.validate();
    const Dims dims{2, params.n_fock};
    const auto ops = mode_operators(dims);
    const auto sp = ops.sm.adjoint();
    const auto bd = ops.b.adjoint();
    const Complex wq(params.omega_q, -params.gamma_total());
    const Complex wb(params.omega_b, -params.kappa_total());
    const Complex gd = -kI * params.gamma_diss();
    return wq * (sp * ops.sm) + wb * (bd * ops.b) + Complex(params.lambda) * (bd * ops.sm + ops.b * sp) +
           gd * (std::polar(1.0, params.theta) * (sp * ops.b) + std::polar(1.0, -params.theta) * (bd * ops.sm));
}

QuantumOperator no_jump_hamiltonian(const LindbladModel& model) {
    Matrix h = model.hamiltonian.data();
    for (const auto& ch : model.channels) {
        h -= kI * ch.rate * (ch.jump.data().adjoint() * ch.jump.data());
    }
    return {std::move(h), model.dims};
}

// ---------------------------------------------------------------------------

double BareParams::dispersive_ratio() const noexcept {
    const double rq = delta_q() == 0.0 ? INFINITY : std::abs(lambda_q / delta_q());
    const double rb = delta_b() == 0.0 ? INFINITY : std::abs(lambda_b / delta_b());
    return std::max(rq, rb);
}

ReducedParams reduce_bare_params(const BareParams& bare) {
    const double dq = bare.delta_q();
    const double db = bare.delta_b();
    if (dq == 0.0 || db == 0.0) {
        throw std::invalid_argument("reduce_bare_params: qubit and magnon must be detuned from the cavity");
    }
    ReducedParams r;
    r.omega_q = bare.omega_q0 + bare.lambda_q * bare.lambda_q / dq;
    r.omega_b = bare.omega_b0 + bare.lambda_b * bare.lambda_b / db;
    r.lambda = bare.lambda_q * bare.lambda_b * (1.0 / (2.0 * dq) + 1.0 / (2.0 * db));
    return r;
}

namespace {

struct FrohlichMatrices {
    Dims dims;
    ModeOperators ops;
    QuantumOperator h0, hi, v;
};

FrohlichMatrices frohlich_matrices(const BareParams& bare, std::size_t n_fock) {
    if (n_fock < 3) throw std::invalid_argument("frohlich_residual: n_fock must be at least 3");
    const double dq = bare.delta_q();
    const double db = bare.delta_b();
    if (dq == 0.0 || db == 0.0) {
        throw std::invalid_argument("frohlich_residual: qubit and magnon must be detuned from the cavity");
    }
    FrohlichMatrices f;
    f.dims = {2, n_fock, n_fock};
    f.ops = mode_operators(f.dims);
    const auto& sm = f.ops.sm;
    const auto& b = f.ops.b;
    const auto& c = f.ops.c;
    const auto sp = sm.adjoint();
    const auto bd = b.adjoint();
    const auto cd = c.adjoint();
    f.h0 = Complex(bare.omega_q0) * (sp * sm) + Complex(bare.omega_b0) * (bd * b) + Complex(bare.omega_c) * (cd * c);
    f.hi = Complex(bare.lambda_q) * (sp * c + sm * cd) + Complex(bare.lambda_b) * (bd * c + b * cd);
    f.v = Complex(bare.lambda_q / dq) * (sm * cd - sp * c) + Complex(bare.lambda_b / db) * (b * cd - bd * c);
    return f;
}

// Indices of basis states with neither bosonic mode on its top level.
std::vector<Eigen::Index> interior_indices(const Dims& dims) {
    std::vector<Eigen::Index> idx;
    const std::size_t nb = dims[1];
    const std::size_t nc = dims[2];
    for (std::size_t q = 0; q < dims[0]; ++q) {
        for (std::size_t m = 0; m + 1 < nb; ++m) {
            for (std::size_t k = 0; k + 1 < nc; ++k) {
                idx.push_back(static_cast<Eigen::Index>((q * nb + m) * nc + k));
            }
        }
    }
    return idx;
}

double scoped_max_abs(const Matrix& m, const Dims& dims, ResidualScope scope) {
    if (scope == ResidualScope::full) return max_abs(m);
    const auto idx = interior_indices(dims);
    return max_abs(m(idx, idx));
}

}  // namespace

double frohlich_residual(const BareParams& bare, std::size_t n_fock, ResidualScope scope) {
    const auto f = frohlich_matrices(bare, n_fock);
    const auto r = f.hi + commutator(f.h0, f.v);
    return scoped_max_abs(r.data(), f.dims, scope);
}

double second_order_residual(const BareParams& bare, std::size_t n_fock, ResidualScope scope) {
    const auto f = frohlich_matrices(bare, n_fock);
    const auto red = reduce_bare_params(bare);
    const auto& sm = f.ops.sm;
    const auto& b = f.ops.b;
    const auto& c = f.ops.c;
    const auto sp = sm.adjoint();
    const auto bd = b.adjoint();
    const auto cd = c.adjoint();
    const auto sz = sp * sm - sm * sp;
    const auto id = identity(f.dims);
    const double dq = bare.delta_q();
    const double db = bare.delta_b();

    const auto target = Complex(red.omega_q) * (sp * sm) + Complex(red.omega_b) * (bd * b) +
                        Complex(red.lambda) * (bd * sm + b * sp) +
                        (Complex(bare.omega_c - bare.lambda_b * bare.lambda_b / db) * id +
                         Complex(bare.lambda_q * bare.lambda_q / dq) * sz) *
                            (cd * c);
    const auto approx = f.h0 + Complex(0.5) * commutator(f.hi, f.v);
    return scoped_max_abs((approx - target).data(), f.dims, scope);
}

}  // namespace nrmb
