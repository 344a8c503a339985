#include "nrmb/validate.hpp"

#include "nrmb/config.hpp"
#include "nrmb/liouvillian.hpp"
#include "nrmb/model.hpp"
#include "nrmb/observables.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

namespace nrmb {

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

CheckResult bounded(const std::string& name, double value, double limit) {
    return {name, value <= limit, sci(value) + " <= " + sci(limit)};
}

CheckResult guarded(const std::string& name, const std::function<CheckResult()>& check) {
    try {
        return check();
    } catch (const std::exception& e) {
        return {name, false, std::string("threw: ") + e.what()};
    }
}

}  // namespace

std::vector<CheckResult> run_invariant_suite() {
    std::vector<CheckResult> out;

    out.push_back(guarded("ladder commutator", [] {
        const std::size_t n = 7;
        const auto a = annihilation(n);
        const Matrix c = commutator(a, creation(n)).data();
        // The top level carries the truncation defect 1 - n.
        const double err = max_abs(c.topLeftCorner(n - 1, n - 1) - Matrix::Identity(n - 1, n - 1));
        return bounded("ladder commutator", err, 1e-14);
    }));

    const SystemParams p = fig2_params(-10.0, 5.0, 0.0);
    const LindbladModel model = build_two_mode(p);

    out.push_back(guarded("trace preservation", [&] {
        return bounded("trace preservation", trace_preservation_error(build_liouvillian(model)), 1e-12);
    }));

    out.push_back(guarded("sparse vs dense assembly", [&] {
        const Matrix diff = Matrix(build_liouvillian(model).matrix) - build_liouvillian_dense(model);
        return bounded("sparse vs dense assembly", max_abs(diff), 1e-12);
    }));

    out.push_back(guarded("steady state invariants", [&] {
        const auto ss = steady_state(build_liouvillian(model));
        ss.rho.validate();
        return bounded("steady state invariants", ss.residual, 1e-8);
    }));

    out.push_back(guarded("solver cross-check", [] {
        SystemParams q = fig2_params(-10.0, 5.0, 0.0);
        q.n_fock = 5;
        q.set_magnon_rabi(0.1);
        const Liouvillian l = build_liouvillian(build_two_mode(q));
        const Matrix a = steady_state(l).rho.data();
        const Matrix b = steady_state_null_space(l).rho.data();
        return bounded("solver cross-check", max_abs(a - b), 1e-9);
    }));

    out.push_back(guarded("mirror symmetry", [] {
        const double gf = solve_correlation(fig2_params(10.0, 5.0, 0.0)).g2;
        const double gb = solve_correlation(fig2_params(-10.0, 5.0, kPi)).g2;
        return bounded("mirror symmetry", std::abs(gf - gb) / std::abs(gf), 1e-4);
    }));

    out.push_back(guarded("reciprocity at tau = 0", [] {
        SystemParams q = fig2_params(-10.0, 0.0, 0.0);
        const double gf = solve_correlation(q).g2;
        q.theta = kPi;
        const double gb = solve_correlation(q).g2;
        return bounded("reciprocity at tau = 0", std::abs(gf - gb) / std::abs(gf), 1e-10);
    }));

    out.push_back(guarded("dressed spectrum", [] {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            SystemParams q;
            q.omega_q = 5000.0 + 20.0 * (u(rng) - 0.5);
            q.lambda = 1.0 + 19.0 * u(rng);
            q.gamma_in = 2.0 * u(rng);
            q.kappa_in = 2.0 * u(rng);
            q.set_gamma_diss(10.0 * u(rng));
            q.theta = 2.0 * kPi * u(rng);
            for (const auto& e : dressed_spectrum_numeric(q, 3)) {
                if (e.n == 0) continue;
                const auto [m, pl] = dressed_spectrum(q, e.n);
                const Complex ref = e.branch == Branch::minus ? m.value : pl.value;
                worst = std::max(worst, std::abs(e.value - ref) / std::max(1.0, std::abs(ref)));
            }
        }
        return bounded("dressed spectrum", worst, 1e-10);
    }));

    out.push_back(guarded("frohlich identity", [] {
        BareParams b{5000.0, 5000.0, 6000.0, 50.0, 60.0};
        return bounded("frohlich identity", frohlich_residual(b, 5), 1e-10);
    }));

    out.push_back(guarded("config round trip", [] {
        const RunConfig cfg = parse_config("");
        const bool same = parse_config(serialize_config(cfg)) == cfg;
        return CheckResult{"config round trip", same, same ? "identical" : "differs"};
    }));

    return out;
}

}  // namespace nrmb
