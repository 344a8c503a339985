#include "nrmb/observables.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace nrmb;

TEST_CASE("g2 of simple states") {
    const Dims dims{2, 5};
    const auto one = DensityMatrix::basis_state(1, dims);  // |g,1>
    CHECK(g2_zero(one) == 0.0);
    CHECK(occupation(one) == doctest::Approx(1.0));

    const auto two = DensityMatrix::basis_state(2, dims);  // |g,2>
    CHECK(g2_zero(two) == doctest::Approx(0.5));

    CHECK_THROWS_AS(g2_zero(DensityMatrix::basis_state(0, dims)), VacuumState);
    CHECK_THROWS_AS(g2_zero(DensityMatrix::basis_state(0, {4})), DimensionError);
}

TEST_CASE("driven damped magnon is coherent") {
    SystemParams p = fig2_params(3.0, 0.0, 0.0);
    p.lambda = 0.0;
    p.n_fock = 10;
    REQUIRE(p.tau == 0.0);
    const auto rec = solve_correlation(p);
    CHECK(std::abs(rec.g2 - 1.0) <= 1e-6);
    // Linear response of b: |xi_b|^2 / (Delta^2 + kappa_in^2).
    CHECK(rec.occupation == doctest::Approx(0.01 / (9.0 + 1.0)).epsilon(1e-5));
}

TEST_CASE("Fig. 2c operating point") {
    const auto fwd = solve_correlation(fig2_params(-10.2, 5.0, 0.0));
    const auto bwd = solve_correlation(fig2_params(-10.2, 5.0, kPi));
    CHECK(fwd.occupation < 1e-2);
    CHECK(bwd.occupation < 1e-2);
    CHECK(fwd.g2 == doctest::Approx(1.615).epsilon(0.05));
    CHECK(bwd.g2 == doctest::Approx(0.089).epsilon(0.10));
    CHECK(fwd.residual <= 1e-8);
    CHECK(fwd.delta == doctest::Approx(-10.2));
    CHECK(fwd.gamma_diss == 5.0);
}

TEST_CASE("contrast") {
    CHECK(contrast(1.3, 1.3) == 0.0);
    CHECK(contrast(1.615, 0.089) == doctest::Approx(0.8955).epsilon(1e-4));
    CHECK(contrast(2.0, 0.0) == 1.0);
    CHECK_THROWS_AS(contrast(0.0, 0.0), std::domain_error);
}

TEST_CASE("Hermitian ladder") {
    SystemParams p;
    const auto [m1, p1] = hermitian_spectrum(p, 1);
    CHECK(m1 == doctest::Approx(p.omega_b - 10.0));
    CHECK(p1 == doctest::Approx(p.omega_b + 10.0));
    const auto [m2, p2] = hermitian_spectrum(p, 2);
    CHECK(m2 == doctest::Approx(2 * p.omega_b - std::sqrt(2.0) * 10.0));
    CHECK(p2 == doctest::Approx(2 * p.omega_b + std::sqrt(2.0) * 10.0));
    CHECK((p2 - p1) - (p1 - 0.0) == doctest::Approx((std::sqrt(2.0) - 2.0) * 10.0));
    CHECK_THROWS_AS(hermitian_spectrum(p, 0), std::invalid_argument);
}

TEST_CASE("dressed spectrum closed forms") {
    SystemParams p = fig2_params(0.0, 5.0, 0.0);
    const Complex wb(p.omega_b, -6.0);
    auto [m, pl] = dressed_spectrum(p, 1);
    CHECK(std::abs(m.value - (wb - Complex(10.0, -5.0))) < 1e-10);
    CHECK(std::abs(pl.value - (wb + Complex(10.0, -5.0))) < 1e-10);
    CHECK(m.value.imag() == doctest::Approx(-1.0));
    CHECK(pl.value.imag() == doctest::Approx(-11.0));

    p.theta = kPi;
    std::tie(m, pl) = dressed_spectrum(p, 1);
    CHECK(std::abs(m.value - (wb - Complex(10.0, 5.0))) < 1e-10);
    CHECK(std::abs(pl.value - (wb + Complex(10.0, 5.0))) < 1e-10);
}

TEST_CASE("dressed spectrum Hermitian limit") {
    SystemParams p;
    p.tau = 0.0;
    p.gamma_in = 0.0;
    p.kappa_in = 0.0;
    p.omega_q = 5007.0;
    for (int n = 1; n <= 4; ++n) {
        const auto [m, pl] = dressed_spectrum(p, n);
        const auto [hm, hp] = hermitian_spectrum(p, n);
        CHECK(m.value.real() == doctest::Approx(hm).epsilon(1e-15));
        CHECK(pl.value.real() == doctest::Approx(hp).epsilon(1e-15));
        CHECK(m.value.imag() == 0.0);
        CHECK(pl.value.imag() == 0.0);
    }
}

TEST_CASE("real parts are direction independent; linewidths are not") {
    SystemParams p = fig2_params(0.0, 5.0, 0.0);
    p.omega_q = 5004.0;
    for (int n = 1; n <= 3; ++n) {
        p.theta = 0.0;
        const auto [m0, p0] = dressed_spectrum(p, n);
        p.theta = kPi;
        const auto [mp, pp] = dressed_spectrum(p, n);
        CHECK(std::abs(m0.value.real() - mp.value.real()) < 1e-9);
        CHECK(std::abs(p0.value.real() - pp.value.real()) < 1e-9);
        CHECK(std::abs(m0.value.imag() - mp.value.imag()) > 1.0);
    }
}

TEST_CASE("linewidth splitting grows with Gamma") {
    double last = -1.0;
    for (int g = 0; g <= 10; ++g) {
        const auto [m, pl] = dressed_spectrum(fig2_params(0.0, g, 0.0), 1);
        const double split = std::abs(pl.value.imag() - m.value.imag());
        CHECK(split > last);
        last = split;
    }
}

TEST_CASE("analytic and numeric spectra agree") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        SystemParams p;
        p.omega_q = 5000.0 + 40.0 * (u(rng) - 0.5);
        p.lambda = 20.0 * u(rng);
        p.gamma_in = 3.0 * u(rng);
        p.kappa_in = 3.0 * u(rng);
        p.mu = 0.5 + u(rng);
        p.nu = 0.5 + u(rng);
        p.tau = 10.0 * u(rng);
        p.theta = 2.0 * kPi * u(rng);
        const auto numeric = dressed_spectrum_numeric(p, 4);
        REQUIRE(numeric.size() == 9);
        CHECK(numeric[0].value == Complex(0.0));
        for (std::size_t j = 1; j < numeric.size(); ++j) {
            const auto [m, pl] = dressed_spectrum(p, numeric[j].n);
            const Complex ref = numeric[j].branch == Branch::minus ? m.value : pl.value;
            worst = std::max(worst, std::abs(numeric[j].value - ref));
        }
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("branch labels follow the Hermitian ancestors through an exceptional point") {
    // Θ = 0, δ = 0: the single-excitation splitting is 2(λ - iΓ), never degenerate;
    // check that the '+' branch keeps the larger real part for all Γ.
    for (double g : {0.0, 2.0, 10.0, 30.0}) {
        const auto [m, pl] = dressed_spectrum(fig2_params(0.0, g, 0.0), 1);
        CHECK(pl.value.real() > m.value.real());
    }
    CHECK(to_string(Branch::plus) == "+");
}
