#include "nrmb/sweep.hpp"

#include "nrmb/golden.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nrmb {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

nlohmann::json params_json(const SystemParams& p) {
    return {{"omega_q", p.omega_q},   {"omega_b", p.omega_b}, {"omega_d", p.omega_d},   {"lambda", p.lambda},
            {"gamma_in", p.gamma_in}, {"kappa_in", p.kappa_in}, {"tau", p.tau},       {"mu", p.mu},
            {"nu", p.nu},             {"theta", p.theta},     {"phi", p.phi},           {"xi", p.xi},
            {"drive", to_string(p.drive)}, {"n_fock", p.n_fock}};
}

nlohmann::json cavity_json(const CavityParams& c) {
    return {{"omega_c", c.omega_c}, {"beta_in", c.beta_in}, {"zeta", c.zeta}, {"n_fock_c", c.n_fock_c}};
}

}  // namespace

double direction_theta(Direction d) { return d == Direction::forward ? 0.0 : kPi; }

std::string to_string(Direction d) { return d == Direction::forward ? "forward" : "backward"; }

double Axis::value(std::size_t i) const {
    if (count == 1) return start;
    if (i + 1 == count) return stop;
    return start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
}

void SweepSpec::validate() const {
    base.validate();
    if (cavity) cavity->validate();
    if (axes.empty() || axes.size() > 2) throw std::invalid_argument("sweep: need one or two axes");
    for (const auto& a : axes) {
        if (a.name != "delta" && a.name != "gamma_diss" && a.name != "xi" && a.name != "theta") {
            throw std::invalid_argument("sweep: unknown axis '" + a.name + "'");
        }
        if (a.count < 1) throw std::invalid_argument("sweep: axis '" + a.name + "' needs count >= 1");
        if (!std::isfinite(a.start) || !std::isfinite(a.stop)) {
            throw std::invalid_argument("sweep: axis '" + a.name + "' has non-finite bounds");
        }
        if (a.name == "gamma_diss" && std::min(a.start, a.stop) < 0.0) {
            throw std::invalid_argument("sweep: gamma_diss must be nonnegative");
        }
    }
    if (axes.size() == 2 && axes[0].name == axes[1].name) throw std::invalid_argument("sweep: duplicate axis");
    if (!sweeps("theta") && directions.empty()) throw std::invalid_argument("sweep: no directions selected");
    for (std::size_t i = 1; i < directions.size(); ++i) {
        if (directions[i] <= directions[i - 1]) {
            throw std::invalid_argument("sweep: directions must be listed forward before backward, without repeats");
        }
    }
    if (magnon_rabi && !(*magnon_rabi >= 0.0)) throw std::invalid_argument("sweep: magnon_rabi must be nonnegative");
    if (cavity && 2 * base.n_fock * cavity->n_fock_c > kMaxHilbertDim) {
        throw DimensionTooLarge("sweep: three-mode dimension exceeds " + std::to_string(kMaxHilbertDim));
    }
}

std::size_t SweepSpec::grid_size() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.count;
    return n;
}

bool SweepSpec::sweeps(const std::string& axis) const {
    return std::any_of(axes.begin(), axes.end(), [&](const Axis& a) { return a.name == axis; });
}

std::size_t SweepSpec::passes() const { return sweeps("theta") ? 1 : directions.size(); }

std::size_t SweepResult::failures() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.ok; }));
}

namespace {

// (axis name, value) of every swept axis at a row-major grid point.
std::vector<std::pair<std::string, double>> point_coordinates(const SweepSpec& spec, std::size_t point) {
    std::vector<std::pair<std::string, double>> out(spec.axes.size());
    std::size_t rem = point;
    for (std::size_t k = spec.axes.size(); k-- > 0;) {
        const auto& a = spec.axes[k];
        out[k] = {a.name, a.value(rem % a.count)};
        rem /= a.count;
    }
    return out;
}

}  // namespace

SystemParams sweep_point_params(const SweepSpec& spec, std::size_t point, std::optional<Direction> direction) {
    SystemParams p = spec.base;
    if (direction) p.theta = direction_theta(*direction);
    for (const auto& [name, v] : point_coordinates(spec, point)) {
        if (name == "delta") {
            p.set_detuning(v);
        } else if (name == "gamma_diss") {
            p.set_gamma_diss(v);
        } else if (name == "xi") {
            p.xi = v;
        } else if (name == "theta") {
            p.theta = v;
        }
    }
    if (spec.magnon_rabi && !spec.sweeps("xi")) p.set_magnon_rabi(*spec.magnon_rabi);
    return p;
}

namespace {

SweepRow solve_row(const SweepSpec& spec, std::size_t point, std::optional<Direction> direction) {
    SweepRow row;
    try {
        const SystemParams p = sweep_point_params(spec, point, direction);
        row.delta = p.detuning();
        row.gamma_diss = p.gamma_diss();
        row.theta = p.theta;
        row.xi = p.xi;
        row.drive = p.drive;
        // Grid coordinates as given, not recomputed from omega_d or tau.
        for (const auto& [name, v] : point_coordinates(spec, point)) {
            if (name == "delta") row.delta = v;
            if (name == "gamma_diss") row.gamma_diss = v;
        }
        const auto rec = solve_correlation(p, spec.cavity, spec.solver);
        row.g2 = rec.g2;
        row.occupation = rec.occupation;
        row.residual = rec.residual;
    } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
        row.g2 = kNaN;
        row.occupation = kNaN;
        row.residual = kNaN;
    }
    row.contrast = kNaN;
    return row;
}

std::optional<Direction> pass_direction(const SweepSpec& spec, std::size_t pass) {
    if (spec.sweeps("theta")) return std::nullopt;
    return spec.directions[pass];
}

void fill_contrast(const SweepSpec& spec, std::vector<SweepRow>& rows) {
    if (spec.passes() != 2) return;
    for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
        auto& f = rows[i];
        auto& b = rows[i + 1];
        if (f.ok && b.ok && f.g2 + b.g2 > 0.0) {
            f.contrast = b.contrast = contrast(f.g2, b.g2);
        }
    }
}

nlohmann::json sweep_meta(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
    nlohmann::json axes = nlohmann::json::array();
    for (const auto& a : spec.axes) {
        axes.push_back({{"name", a.name}, {"start", a.start}, {"stop", a.stop}, {"count", a.count}});
    }
    nlohmann::json dirs = nlohmann::json::array();
    if (!spec.sweeps("theta")) {
        for (auto d : spec.directions) dirs.push_back(to_string(d));
    }
    nlohmann::json failed = nlohmann::json::array();
    bool fallback = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].ok) failed.push_back({{"row", i}, {"error", rows[i].error}});
        if (rows[i].ok && rows[i].drive != spec.base.drive) fallback = true;
    }
    nlohmann::json drive = {{"mode", to_string(spec.base.drive)}, {"direct_fallback_at_tau0", fallback}};
    if (spec.magnon_rabi && !spec.sweeps("xi")) drive["magnon_rabi"] = *spec.magnon_rabi;

    return {
        {"tool", "nrmb"},
        {"version", kToolVersion},
        {"model", spec.cavity ? "three-mode" : "two-mode"},
        {"params", params_json(spec.base)},
        {"cavity", spec.cavity ? cavity_json(*spec.cavity) : nlohmann::json(nullptr)},
        {"axes", axes},
        {"directions", dirs},
        {"drive", drive},
        {"truncation", {{"n_fock", spec.base.n_fock}, {"n_fock_c", spec.cavity ? spec.cavity->n_fock_c : 0}}},
        {"solver",
         {{"method", to_string(SolveMethod::trace_replacement)},
          {"backend", sparse_lu_backend()},
          {"residual_tol", spec.solver.residual_tol},
          {"kernel_ratio", spec.solver.kernel_ratio},
          {"check_kernel", spec.solver.check_kernel}}},
        {"rows", rows.size()},
        {"failures", failed},
    };
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, int threads) {
    spec.validate();
    const std::size_t passes = spec.passes();
    const auto total = static_cast<long>(spec.grid_size() * passes);
    std::vector<SweepRow> rows(static_cast<std::size_t>(total));
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 4) num_threads(nthreads)
    for (long j = 0; j < total; ++j) {
        const auto idx = static_cast<std::size_t>(j);
        rows[idx] = solve_row(spec, idx / passes, pass_direction(spec, idx % passes));
    }

    fill_contrast(spec, rows);
    SweepResult result{std::move(rows), {}};
    result.meta = sweep_meta(spec, result.rows);
    return result;
}

SweepResult run_sweep_serial(const SweepSpec& spec) {
    spec.validate();
    const std::size_t passes = spec.passes();
    std::vector<SweepRow> rows;
    rows.reserve(spec.grid_size() * passes);
    for (std::size_t point = 0; point < spec.grid_size(); ++point) {
        for (std::size_t pass = 0; pass < passes; ++pass) {
            rows.push_back(solve_row(spec, point, pass_direction(spec, pass)));
        }
    }
    fill_contrast(spec, rows);
    SweepResult result{std::move(rows), {}};
    result.meta = sweep_meta(spec, result.rows);
    return result;
}

// ---------------------------------------------------------------------------

double contrast_at(const SystemParams& base, double delta, double gamma_diss, std::optional<double> magnon_rabi,
                   const SolverOptions& opts, double* g_fwd, double* g_bwd) {
    SystemParams p = base;
    p.set_detuning(delta);
    p.set_gamma_diss(gamma_diss);
    if (magnon_rabi) p.set_magnon_rabi(*magnon_rabi);
    p.theta = direction_theta(Direction::forward);
    const double gf = solve_correlation(p, std::nullopt, opts).g2;
    p.theta = direction_theta(Direction::backward);
    const double gb = solve_correlation(p, std::nullopt, opts).g2;
    if (g_fwd) *g_fwd = gf;
    if (g_bwd) *g_bwd = gb;
    return contrast(gf, gb);
}

std::vector<CmaxPoint> cmax_scan(const SystemParams& base, const std::vector<double>& gamma_grid,
                                 const CmaxOptions& opts, std::optional<double> magnon_rabi,
                                 const SolverOptions& solver, int threads) {
    if (opts.coarse_count < 2) throw std::invalid_argument("cmax_scan: coarse_count must be >= 2");
    const double step = (opts.delta_hi - opts.delta_lo) / static_cast<double>(opts.coarse_count - 1);
    if (!(step > 0.0) || step > 0.25 + 1e-12) {
        throw std::invalid_argument("cmax_scan: coarse resolution must be in (0, 0.25]");
    }
    if (opts.delta_lo > -2.0 * std::abs(base.lambda) || opts.delta_hi < 2.0 * std::abs(base.lambda)) {
        throw std::invalid_argument("cmax_scan: detuning window must cover ±2·lambda");
    }
    if (!(opts.refine_tol > 0.0)) throw std::invalid_argument("cmax_scan: refine_tol must be positive");

    const Axis grid{"delta", opts.delta_lo, opts.delta_hi, opts.coarse_count};
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
    std::vector<CmaxPoint> out;
    out.reserve(gamma_grid.size());

    for (double gamma : gamma_grid) {
        std::vector<double> c(opts.coarse_count, kNaN);
        const auto n = static_cast<long>(opts.coarse_count);
#pragma omp parallel for schedule(dynamic, 4) num_threads(nthreads)
        for (long k = 0; k < n; ++k) {
            try {
                c[static_cast<std::size_t>(k)] =
                    contrast_at(base, grid.value(static_cast<std::size_t>(k)), gamma, magnon_rabi, solver);
            } catch (const std::exception&) {
                // left as NaN; excluded from the maximum
            }
        }

        std::size_t best = opts.coarse_count;
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (std::isnan(c[k])) continue;
            // Strict improvement beyond round-off keeps the first (most negative)
            // of two mirror-symmetric maxima.
            if (best == opts.coarse_count || c[k] > c[best] * (1.0 + 1e-9)) best = k;
        }
        if (best == opts.coarse_count) throw SolverError("cmax_scan: every coarse point failed");

        const double centre = grid.value(best);
        const double lo = std::max(opts.delta_lo, centre - step);
        const double hi = std::min(opts.delta_hi, centre + step);
        auto objective = [&](double d) {
            try {
                return contrast_at(base, d, gamma, magnon_rabi, solver);
            } catch (const std::exception&) {
                return -1.0;
            }
        };
        const ScalarMax refined = golden_section_maximize(objective, lo, hi, opts.refine_tol);

        CmaxPoint pt;
        pt.gamma_diss = gamma;
        pt.delta_max = refined.value >= c[best] ? refined.x : centre;
        pt.c_max = contrast_at(base, pt.delta_max, gamma, magnon_rabi, solver, &pt.g_fwd, &pt.g_bwd);
        out.push_back(pt);
    }
    return out;
}

std::pair<SweepResult, SweepResult> fig5_compare(const SweepSpec& slice, const CavityParams& cavity, int threads) {
    cavity.validate();
    if (2 * slice.base.n_fock * cavity.n_fock_c > kMaxHilbertDim) {
        throw DimensionTooLarge("fig5_compare: three-mode dimension " +
                                std::to_string(2 * slice.base.n_fock * cavity.n_fock_c) + " exceeds " +
                                std::to_string(kMaxHilbertDim));
    }
    SweepSpec two = slice;
    two.cavity.reset();
    SweepSpec three = slice;
    three.cavity = cavity;
    return {run_sweep(two, threads), run_sweep(three, threads)};
}

std::vector<SpectrumRow> spectra_table(const SystemParams& base, const std::vector<double>& gamma_grid, int n_max) {
    std::vector<SpectrumRow> rows;
    for (double gamma : gamma_grid) {
        for (Direction d : {Direction::forward, Direction::backward}) {
            SystemParams p = base;
            p.set_gamma_diss(gamma);
            p.theta = direction_theta(d);
            for (int n = 1; n <= n_max; ++n) {
                const auto [minus, plus] = dressed_spectrum(p, n);
                rows.push_back({gamma, p.theta, n, Branch::minus, minus.value});
                rows.push_back({gamma, p.theta, n, Branch::plus, plus.value});
            }
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------

namespace presets {

namespace {

SweepSpec grid_spec(std::vector<Direction> dirs) {
    SweepSpec s;
    s.axes = {{"gamma_diss", 0.0, 10.0, 51}, {"delta", -30.0, 30.0, 121}};
    s.directions = std::move(dirs);
    return s;
}

}  // namespace

SweepSpec fig2a() { return grid_spec({Direction::forward}); }
SweepSpec fig2b() { return grid_spec({Direction::backward}); }
SweepSpec fig3a() { return grid_spec({Direction::forward, Direction::backward}); }

SweepSpec fig2c() {
    SweepSpec s;
    s.base.set_gamma_diss(5.0);
    s.axes = {{"delta", -30.0, 30.0, 241}};
    return s;
}

SweepSpec fig2c_reciprocal() {
    SweepSpec s = fig2c();
    s.base.tau = 0.0;
    return s;
}

SweepSpec fig4c() {
    SweepSpec s;
    s.base.set_detuning(10.0);
    s.axes = {{"gamma_diss", 0.0, 10.0, 101}};
    return s;
}

std::vector<double> fig3b_gammas() {
    std::vector<double> g;
    for (int k = 1; k <= 10; ++k) g.push_back(static_cast<double>(k));
    return g;
}

std::vector<double> fig4_gammas() {
    std::vector<double> g;
    for (int k = 0; k <= 100; ++k) g.push_back(0.1 * k);
    return g;
}

CavityParams fig5_cavity(const SystemParams& base) {
    CavityParams c;
    c.omega_c = base.omega_b + 1000.0;
    c.beta_in = 1.0;
    c.zeta = 1.0;
    c.n_fock_c = 4;
    return c;
}

}  // namespace presets

}  // namespace nrmb
