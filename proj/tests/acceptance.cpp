// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run all criteria
//   acceptance P3 P7      run a subset

#include "nrmb/liouvillian.hpp"
#include "nrmb/model.hpp"
#include "nrmb/observables.hpp"
#include "nrmb/sweep.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace nrmb;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Outcome p1() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto pt = cmax_scan(SystemParams{}, {5.0}, {}, 0.1, {}, 1).front();
    const double secs = elapsed(t0);
    const bool ok = std::abs(pt.c_max - 0.895) <= 0.02 && std::abs(pt.delta_max + 10.2) <= 0.2 &&
                    rel(pt.g_fwd, 1.615) <= 0.05 && std::abs(pt.g_bwd - 0.089) / 0.089 <= 0.10 && secs < 30.0;
    char buf[256];
    std::snprintf(buf, sizeof buf, "C_max=%.4f Delta_max=%.3f g_fwd=%.4f g_bwd=%.4f (%.1f s, 1 thread)", pt.c_max,
                  pt.delta_max, pt.g_fwd, pt.g_bwd, secs);
    return {ok, buf};
}

Outcome p2() {
    double worst = 0.0;
    for (int k = 0; k <= 20; ++k) {
        const double delta = -20.0 + 2.0 * k;
        const double f = solve_correlation(fig2_params(delta, 5.0, 0.0)).g2;
        const double b = solve_correlation(fig2_params(-delta, 5.0, kPi)).g2;
        worst = std::max(worst, rel(f, b));
    }
    return {worst <= 1e-4, "max relative mirror difference " + fmt("%.2e", worst)};
}

Outcome p3() {
    const auto pts = cmax_scan(SystemParams{}, presets::fig3b_gammas());
    bool ok = true;
    std::string table;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const auto& p = pts[k];
        if (k > 0 && p.c_max < pts[k - 1].c_max) ok = false;
        if (p.gamma_diss >= 2.0 && !(p.c_max > 0.8)) ok = false;
        if (std::abs(p.delta_max) < 8.0 || std::abs(p.delta_max) > 12.0) ok = false;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s%g:%.3f@%.2f", k ? " " : "", p.gamma_diss, p.c_max, p.delta_max);
        table += buf;
    }
    return {ok, "Gamma:C_max@Delta_max " + table};
}

Outcome p4() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        SystemParams p;
        p.omega_q = 5000.0 + 40.0 * (u(rng) - 0.5);
        p.lambda = 1.0 + 19.0 * u(rng);
        p.gamma_in = 3.0 * u(rng);
        p.kappa_in = 3.0 * u(rng);
        p.set_gamma_diss(10.0 * u(rng));
        p.theta = 2.0 * kPi * u(rng);
        for (const auto& e : dressed_spectrum_numeric(p, 3)) {
            if (e.n == 0) {
                worst = std::max(worst, std::abs(e.value));
                continue;
            }
            const auto [m, pl] = dressed_spectrum(p, e.n);
            worst = std::max(worst, std::abs(e.value - (e.branch == Branch::minus ? m.value : pl.value)));
        }
    }

    // Real parts for the two port phases, ω_q = ω_b.
    double re_gap = 0.0;
    for (int g = 0; g <= 10; ++g) {
        for (int n = 1; n <= 3; ++n) {
            const auto [m0, p0] = dressed_spectrum(fig2_params(0.0, g, 0.0), n);
            const auto [mp, pp] = dressed_spectrum(fig2_params(0.0, g, kPi), n);
            re_gap = std::max({re_gap, std::abs(m0.value.real() - mp.value.real()),
                               std::abs(p0.value.real() - pp.value.real())});
        }
    }

    // Hermitian limit: no dissipation at all.
    SystemParams h;
    h.tau = 0.0;
    h.gamma_in = 0.0;
    h.kappa_in = 0.0;
    h.omega_q = 5006.0;
    double herm = 0.0;
    for (int n = 1; n <= 3; ++n) {
        const auto [m, pl] = dressed_spectrum(h, n);
        const auto [hm, hp] = hermitian_spectrum(h, n);
        herm = std::max({herm, std::abs(m.value - hm), std::abs(pl.value - hp)});
    }

    // Linewidth splitting strictly increasing in Γ (Θ = 0, ω_q = ω_b).
    bool monotone = true;
    double last = -1.0;
    for (int g = 0; g <= 10; ++g) {
        const auto [m, pl] = dressed_spectrum(fig2_params(0.0, g, 0.0), 1);
        const double split = std::abs(pl.value.imag() - m.value.imag());
        monotone = monotone && split > last;
        last = split;
    }

    const bool ok = worst <= 1e-10 && re_gap <= 1e-12 && herm <= 1e-12 && monotone;
    return {ok, "analytic vs numeric " + fmt("%.2e", worst) + ", Re gap across Theta " + fmt("%.2e", re_gap) +
                    ", Hermitian limit " + fmt("%.2e", herm) + (monotone ? ", splitting monotone" : ", splitting NOT monotone")};
}

struct PresetCase {
    std::string name;
    SweepSpec spec;
};

std::vector<PresetCase> solver_presets() {
    std::vector<PresetCase> out = {
        {"2a", presets::fig2a()},         {"2b", presets::fig2b()},
        {"3a", presets::fig3a()},         {"2c", presets::fig2c()},
        {"2c-tau0", presets::fig2c_reciprocal()}, {"4c", presets::fig4c()},
    };
    SweepSpec five = presets::fig2c();
    five.cavity = presets::fig5_cavity(five.base);
    out.push_back({"5", five});
    return out;
}

Outcome p5() {
    double worst_residual = 0.0;
    double worst_rk4 = 0.0;
    std::size_t solves = 0;
    std::size_t invariant_failures = 0;
    std::string first_failure;

    for (const auto& pc : solver_presets()) {
        const SweepSpec& s = pc.spec;
        const std::size_t passes = s.passes();
        const auto total = static_cast<long>(s.grid_size() * passes);
        std::vector<double> residual(static_cast<std::size_t>(total), 0.0);
        std::vector<std::string> error(static_cast<std::size_t>(total));

#pragma omp parallel for schedule(dynamic, 8)
        for (long j = 0; j < total; ++j) {
            const auto idx = static_cast<std::size_t>(j);
            const auto dir = s.sweeps("theta") ? std::nullopt : std::optional<Direction>(s.directions[idx % passes]);
            try {
                const auto p = sweep_point_params(s, idx / passes, dir);
                const auto model = s.cavity ? build_three_mode(p, *s.cavity) : build_two_mode(p);
                const auto ss = steady_state(build_liouvillian(model));
                ss.rho.validate();
                residual[idx] = ss.residual;
            } catch (const std::exception& e) {
                error[idx] = e.what();
            }
        }
        for (long j = 0; j < total; ++j) {
            const auto idx = static_cast<std::size_t>(j);
            worst_residual = std::max(worst_residual, residual[idx]);
            if (!error[idx].empty() || residual[idx] > 1e-8) {
                ++invariant_failures;
                if (first_failure.empty()) first_failure = pc.name + ": " + error[idx];
            }
        }
        solves += static_cast<std::size_t>(total);

        // RK4 oracle on the first, middle and last grid points of every preset.
        for (std::size_t point : {std::size_t{0}, s.grid_size() / 2, s.grid_size() - 1}) {
            const auto p = sweep_point_params(s, point, s.directions.front());
            const auto model = s.cavity ? build_three_mode(p, *s.cavity) : build_two_mode(p);
            const auto direct = steady_state(build_liouvillian(model));
            const auto late = steady_state_long_time(model, DensityMatrix::basis_state(0, model.dims));
            worst_rk4 = std::max(worst_rk4, max_abs(direct.rho.data() - late.rho.data()));
        }
    }
    const bool ok = invariant_failures == 0 && worst_residual <= 1e-8 && worst_rk4 <= 1e-6;
    std::string detail = std::to_string(solves) + " steady states, max residual " + fmt("%.2e", worst_residual) +
                         ", invariant failures " + std::to_string(invariant_failures) + ", RK4 vs direct " +
                         fmt("%.2e", worst_rk4);
    if (!first_failure.empty()) detail += " (first: " + first_failure + ")";
    return {ok, detail};
}

Outcome p6() {
    const auto recip = run_sweep(presets::fig2c_reciprocal());
    double worst_recip = 0.0;
    for (std::size_t i = 0; i + 1 < recip.rows.size(); i += 2) {
        worst_recip = std::max(worst_recip, rel(recip.rows[i].g2, recip.rows[i + 1].g2));
    }

    SystemParams lin = fig2_params(4.0, 0.0, 0.0);
    lin.lambda = 0.0;
    lin.n_fock = 10;
    const double g_coherent = solve_correlation(lin).g2;

    SweepSpec base = presets::fig2c();
    const auto ref = run_sweep(base);
    SweepSpec half = base;
    half.magnon_rabi = 0.05;
    const auto weak = run_sweep(half);
    SweepSpec deep = base;
    deep.base.n_fock = 9;
    const auto fock9 = run_sweep(deep);
    double worst_drive = 0.0;
    double worst_fock = 0.0;
    for (std::size_t i = 0; i < ref.rows.size(); ++i) {
        worst_drive = std::max(worst_drive, std::abs(weak.rows[i].g2 - ref.rows[i].g2) / ref.rows[i].g2);
        worst_fock = std::max(worst_fock, std::abs(fock9.rows[i].g2 - ref.rows[i].g2) / ref.rows[i].g2);
    }

    const bool ok = worst_recip <= 1e-10 && std::abs(g_coherent - 1.0) <= 1e-6 && worst_drive < 0.01 &&
                    worst_fock < 0.001 && recip.failures() + ref.failures() + weak.failures() + fock9.failures() == 0;
    return {ok, "tau=0 direction gap " + fmt("%.2e", worst_recip) + ", coherent g2-1 " +
                    fmt("%.2e", g_coherent - 1.0) + ", drive halving " + fmt("%.3e", worst_drive) +
                    ", Fock 7->9 " + fmt("%.3e", worst_fock)};
}

Outcome p7() {
    const SweepSpec slice = presets::fig2c();
    const auto [two, three] = fig5_compare(slice, presets::fig5_cavity(slice.base));
    std::size_t flips = 0;
    std::string where;
    for (std::size_t i = 0; i < two.rows.size(); ++i) {
        const double a = std::log10(two.rows[i].g2);
        const double b = std::log10(three.rows[i].g2);
        if ((a < 0.0) != (b < 0.0)) {
            ++flips;
            char buf[160];
            std::snprintf(buf, sizeof buf, " [theta=%s delta=%g: two-mode g2=%.6f, three-mode g2=%.6f]",
                          two.rows[i].theta == 0.0 ? "0" : "pi", two.rows[i].delta, two.rows[i].g2, three.rows[i].g2);
            where += buf;
        }
    }
    const bool ok = flips == 0 && two.failures() + three.failures() == 0;
    return {ok, std::to_string(flips) + " classification mismatches over " + std::to_string(two.rows.size()) +
                    " points" + where};
}

Outcome p8() {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_residual = 0.0;
    double worst_lambda = 0.0;
    for (int k = 0; k < 3; ++k) {
        const BareParams b{5000.0 + 100.0 * (u(rng) - 0.5), 5000.0 + 100.0 * (u(rng) - 0.5),
                           6000.0 + 500.0 * (u(rng) - 0.5), 20.0 + 80.0 * u(rng), 20.0 + 80.0 * u(rng)};
        worst_residual = std::max(worst_residual, frohlich_residual(b, 5));

        // Direct evaluation: the |e,0,0> -> |g,1,0> element of ½[H_I, V],
        // with the generators assembled here from explicit Kronecker products.
        const int n = 3;
        Matrix a = Matrix::Zero(n, n);
        for (int j = 1; j < n; ++j) a(j - 1, j) = std::sqrt(static_cast<double>(j));
        Matrix sm = Matrix::Zero(2, 2);
        sm(0, 1) = 1.0;
        const Matrix i2 = Matrix::Identity(2, 2);
        const Matrix in = Matrix::Identity(n, n);
        const Matrix S = Eigen::kroneckerProduct(Matrix(Eigen::kroneckerProduct(sm, in)), in);
        const Matrix B = Eigen::kroneckerProduct(Matrix(Eigen::kroneckerProduct(i2, a)), in);
        const Matrix C = Eigen::kroneckerProduct(Matrix(Eigen::kroneckerProduct(i2, in)), a);
        const double dq = b.omega_q0 - b.omega_c;
        const double db = b.omega_b0 - b.omega_c;
        const Matrix hi = b.lambda_q * (S.adjoint() * C + S * C.adjoint()) + b.lambda_b * (B.adjoint() * C + B * C.adjoint());
        const Matrix v = (b.lambda_q / dq) * (S * C.adjoint() - S.adjoint() * C) +
                         (b.lambda_b / db) * (B * C.adjoint() - B.adjoint() * C);
        const Matrix second = 0.5 * (hi * v - v * hi);
        const Eigen::Index e00 = (1 * n + 0) * n + 0;
        const Eigen::Index g10 = (0 * n + 1) * n + 0;
        const double direct = second(g10, e00).real();
        worst_lambda = std::max(worst_lambda, std::abs(direct - reduce_bare_params(b).lambda));
    }
    const bool ok = worst_residual <= 1e-10 && worst_lambda <= 1e-10;
    return {ok, "interior Frohlich residual " + fmt("%.2e", worst_residual) + ", lambda vs direct " +
                    fmt("%.2e", worst_lambda)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::map<std::string, std::function<Outcome()>> criteria = {
        {"P1", p1}, {"P2", p2}, {"P3", p3}, {"P4", p4}, {"P5", p5}, {"P6", p6}, {"P7", p7}, {"P8", p8},
    };
    std::set<std::string> selected;
    for (int i = 1; i < argc; ++i) {
        if (!criteria.contains(argv[i])) {
            std::fprintf(stderr, "unknown criterion %s\n", argv[i]);
            return 2;
        }
        selected.insert(argv[i]);
    }

    int failed = 0;
    for (const auto& [name, run] : criteria) {
        if (!selected.empty() && !selected.contains(name)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        std::printf("%s %s  %s  [%.1f s]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), elapsed(t0));
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
