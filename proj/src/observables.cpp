#include "nrmb/observables.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>

namespace nrmb {

namespace {

QuantumOperator magnon_annihilation(const Dims& dims) {
    if (dims.size() < 2) throw DimensionError("magnon observables need a (qubit, magnon, ...) space");
    return embed(annihilation(dims[1]), 1, dims);
}

}  // namespace

double occupation(const DensityMatrix& rho) {
    const auto b = magnon_annihilation(rho.dims());
    return expectation(rho, b.adjoint() * b).real();
}

double g2_zero(const DensityMatrix& rho) {
    const auto b = magnon_annihilation(rho.dims());
    const auto bd = b.adjoint();
    const Complex n = expectation(rho, bd * b);
    const Complex nn = expectation(rho, bd * bd * b * b);
    if (!(n.real() > kVacuumThreshold)) {
        throw VacuumState("g2_zero: magnon occupation " + std::to_string(n.real()) + " is below threshold");
    }
    if (std::abs(n.imag()) > 1e-10 || std::abs(nn.imag()) > 1e-10) {
        throw std::runtime_error("g2_zero: expectation values are not real");
    }
    return nn.real() / (n.real() * n.real());
}

double contrast(double g_fwd, double g_bwd) {
    const double sum = g_fwd + g_bwd;
    if (!(sum > 0.0)) throw std::domain_error("contrast: g_fwd + g_bwd must be positive");
    return std::abs(g_fwd - g_bwd) / sum;
}

CorrelationRecord solve_correlation(const SystemParams& params, const std::optional<CavityParams>& cavity,
                                    const SolverOptions& opts) {
    const auto model = cavity ? build_three_mode(params, *cavity) : build_two_mode(params);
    const auto ss = steady_state(build_liouvillian(model), opts);
    CorrelationRecord rec;
    rec.theta = params.theta;
    rec.delta = params.detuning();
    rec.gamma_diss = params.gamma_diss();
    rec.occupation = occupation(ss.rho);
    rec.g2 = g2_zero(ss.rho);
    rec.residual = ss.residual;
    return rec;
}

std::string to_string(Branch b) { return b == Branch::plus ? "+" : "-"; }

std::pair<double, double> hermitian_spectrum(const SystemParams& params, int n) {
    if (n < 1) throw std::invalid_argument("hermitian_spectrum: n must be >= 1");
    const double delta = params.omega_q - params.omega_b;
    const double centre = n * params.omega_b + 0.5 * delta;
    const double half = 0.5 * std::sqrt(delta * delta + 4.0 * n * params.lambda * params.lambda);
    return {centre - half, centre + half};
}

std::pair<DressedEigenvalue, DressedEigenvalue> dressed_spectrum(const SystemParams& params, int n) {
    if (n < 1) throw std::invalid_argument("dressed_spectrum: n must be >= 1");
    const double delta = params.omega_q - params.omega_b;
    const double dk = params.gamma_total() - params.kappa_total();
    const double g = params.gamma_diss();
    const Complex ep = std::polar(1.0, params.theta);

    // Discriminant along the path s: 0 (Hermitian) -> 1 (full dissipation).
    auto discriminant = [&](double s) {
        const Complex dt(delta, -s * dk);
        const Complex cp = params.lambda - kI * s * g * ep;
        const Complex cm = params.lambda - kI * s * g * std::conj(ep);
        return dt * dt + 4.0 * static_cast<double>(n) * cp * cm;
    };

    Complex root = std::sqrt(discriminant(0.0));  // real, nonnegative
    constexpr int kSteps = 512;
    for (int k = 1; k <= kSteps; ++k) {
        const Complex r = std::sqrt(discriminant(static_cast<double>(k) / kSteps));
        root = std::abs(r - root) <= std::abs(-r - root) ? r : -r;
    }

    const Complex wb(params.omega_b, -params.kappa_total());
    const Complex dt(delta, -dk);
    const Complex centre = static_cast<double>(n) * wb + 0.5 * dt;
    return {DressedEigenvalue{n, Branch::minus, centre - 0.5 * root},
            DressedEigenvalue{n, Branch::plus, centre + 0.5 * root}};
}

std::vector<DressedEigenvalue> dressed_spectrum_numeric(const SystemParams& params, int n_max) {
    if (n_max < 1) throw std::invalid_argument("dressed_spectrum_numeric: n_max must be >= 1");
    SystemParams p = params;
    p.n_fock = std::max<std::size_t>(p.n_fock, static_cast<std::size_t>(n_max) + 1);
    const Matrix h = effective_hamiltonian(p).data();
    const auto nb = static_cast<Eigen::Index>(p.n_fock);
    // Composite index of |q>|m> with q ∈ {g=0, e=1}.
    auto idx = [nb](Eigen::Index q, Eigen::Index m) { return q * nb + m; };

    std::vector<DressedEigenvalue> out;
    out.push_back({0, Branch::minus, h(idx(0, 0), idx(0, 0))});
    for (int n = 1; n <= n_max; ++n) {
        const std::vector<Eigen::Index> block{idx(0, n), idx(1, n - 1)};
        const Eigen::Matrix2cd sub = h(block, block);
        Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(sub, false);
        const Complex e0 = es.eigenvalues()(0);
        const Complex e1 = es.eigenvalues()(1);
        const auto [am, ap] = dressed_spectrum(p, n);
        const bool direct = std::abs(e0 - am.value) + std::abs(e1 - ap.value) <=
                            std::abs(e1 - am.value) + std::abs(e0 - ap.value);
        out.push_back({n, Branch::minus, direct ? e0 : e1});
        out.push_back({n, Branch::plus, direct ? e1 : e0});
    }
    return out;
}

}  // namespace nrmb
