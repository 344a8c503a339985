#include "commands.hpp"

#include "nrmb/csv.hpp"
#include "nrmb/observables.hpp"
#include "nrmb/sweep.hpp"
#include "nrmb/validate.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

namespace nrmb::cli {

namespace {

nlohmann::json record_json(const CorrelationRecord& r) {
    return {{"theta", r.theta},
            {"delta", r.delta},
            {"gamma_diss", r.gamma_diss},
            {"g2", r.g2},
            {"log10_g2", r.g2 > 0.0 ? std::log10(r.g2) : 0.0},
            {"occupation", r.occupation},
            {"residual", r.residual}};
}

nlohmann::json base_meta(const std::string& kind, const RunConfig& cfg) {
    const auto& p = cfg.system;
    return {{"tool", "nrmb"},
            {"version", kToolVersion},
            {"kind", kind},
            {"params",
             {{"omega_q", p.omega_q},
              {"omega_b", p.omega_b},
              {"omega_d", p.omega_d},
              {"lambda", p.lambda},
              {"gamma_in", p.gamma_in},
              {"kappa_in", p.kappa_in},
              {"tau", p.tau},
              {"mu", p.mu},
              {"nu", p.nu},
              {"phi", p.phi},
              {"drive", to_string(p.drive)},
              {"n_fock", p.n_fock}}},
            {"solver",
             {{"residual_tol", cfg.solver.residual_tol},
              {"kernel_ratio", cfg.solver.kernel_ratio},
              {"check_kernel", cfg.solver.check_kernel}}}};
}

void write_or_print(const std::string& path, const std::function<void(std::ostream&)>& emit,
                    const std::function<void()>& write_file, std::ostream& out) {
    if (path.empty() || path == "-") {
        emit(out);
    } else {
        write_file();
    }
}

int report_sweep(const SweepResult& r, const std::string& path, std::ostream& out, std::ostream& err) {
    write_or_print(path, [&](std::ostream& o) { write_sweep_csv(o, r); }, [&] { write_csv(r, path); }, out);
    if (r.failures() > 0) {
        err << "nrmb: " << r.failures() << " of " << r.rows.size() << " grid points failed\n";
        return kSolverFailure;
    }
    return kOk;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || s.empty()) throw ConfigError("grid", 0, "not a number: '" + s + "'");
        return v;
    };
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
        if (parts.size() != 3) throw ConfigError("grid", 0, "expected start:stop:count");
        const double count = number(parts[2]);
        if (count < 2 || count != std::floor(count)) throw ConfigError("grid", 0, "count must be an integer >= 2");
        const Axis a{"grid", number(parts[0]), number(parts[1]), static_cast<std::size_t>(count)};
        for (std::size_t i = 0; i < a.count; ++i) out.push_back(a.value(i));
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(number(item));
    if (out.empty()) throw ConfigError("grid", 0, "empty grid");
    return out;
}

RunConfig resolve(const Common& common, const Overrides& over, std::ostream& err) {
    RunConfig cfg = common.config_path.empty() ? parse_config("") : load_config(common.config_path);
    auto& p = cfg.system;
    if (over.delta) p.set_detuning(*over.delta);
    if (over.gamma_diss) p.set_gamma_diss(*over.gamma_diss);
    if (over.tau) p.tau = *over.tau;
    if (over.theta) p.theta = *over.theta;
    if (over.n_fock) p.n_fock = *over.n_fock;
    if (cfg.magnon_rabi) p.set_magnon_rabi(*cfg.magnon_rabi);
    try {
        p.validate();
        if (cfg.cavity) cfg.cavity->validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("system", 0, e.what());
    }
    if (common.explain) {
        for (const auto& line : cfg.explain) err << line << "\n";
        if (over.delta || over.gamma_diss || over.tau || over.theta || over.n_fock) {
            err << "(command-line overrides applied after the config)\n";
        }
        err << "threads = " << resolved_threads(common, cfg) << "\n";
    }
    return cfg;
}

int resolved_threads(const Common& common, const RunConfig& cfg) {
    if (common.threads) return *common.threads;
    return threads_from_env(cfg.threads);
}

int cmd_solve(const Common& common, const Overrides& over, const std::string& direction, std::ostream& out,
              std::ostream& err) {
    RunConfig cfg = resolve(common, over, err);
    auto solve_one = [&](const SystemParams& p) {
        CorrelationRecord rec;
        if (cfg.method == SolveMethod::null_space) {
            if (cfg.cavity) throw DimensionTooLarge("null-space method is limited to the two-mode model");
            const auto ss = steady_state_null_space(build_liouvillian(build_two_mode(p)), cfg.solver);
            rec = {p.theta, p.detuning(), p.gamma_diss(), g2_zero(ss.rho), occupation(ss.rho), ss.residual};
        } else {
            rec = solve_correlation(p, cfg.cavity, cfg.solver);
        }
        if (over.delta) rec.delta = *over.delta;
        return rec;
    };

    if (direction == "both") {
        SystemParams p = cfg.system;
        p.theta = direction_theta(Direction::forward);
        const auto f = solve_one(p);
        p.theta = direction_theta(Direction::backward);
        const auto b = solve_one(p);
        nlohmann::json j = {{"forward", record_json(f)}, {"backward", record_json(b)}};
        j["contrast"] = contrast(f.g2, b.g2);
        out << j.dump(2) << "\n";
        return kOk;
    }
    SystemParams p = cfg.system;
    if (direction == "forward") p.theta = direction_theta(Direction::forward);
    if (direction == "backward") p.theta = direction_theta(Direction::backward);
    out << record_json(solve_one(p)).dump(2) << "\n";
    return kOk;
}

int cmd_sweep(const Common& common, const std::string& output, std::ostream& out, std::ostream& err) {
    if (common.config_path.empty()) throw ConfigError("--config", 0, "sweep needs a config file");
    const RunConfig cfg = resolve(common, {}, err);
    if (cfg.axes.empty()) throw ConfigError("sweep.axis1", 0, "sweep needs at least one axis");
    SweepSpec spec = cfg.sweep_spec();
    try {
        spec.validate();
    } catch (const DimensionTooLarge&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError("sweep", 0, e.what());
    }
    const auto result = run_sweep(spec, resolved_threads(common, cfg));
    return report_sweep(result, output.empty() ? cfg.output : output, out, err);
}

int cmd_spectra(const Common& common, const Overrides& over, int n_max, const std::string& gamma_grid,
                bool hermitian, const std::string& output, std::ostream& out, std::ostream& err) {
    if (n_max < 1) throw ConfigError("--n", 0, "must be >= 1");
    RunConfig cfg = resolve(common, over, err);
    const SystemParams& p = cfg.system;

    if (hermitian) {
        out << "n,branch,omega\n";
        for (int n = 1; n <= n_max; ++n) {
            const auto [m, pl] = hermitian_spectrum(p, n);
            out << n << ",-," << format_number(m) << "\n" << n << ",+," << format_number(pl) << "\n";
        }
        return kOk;
    }

    std::vector<SpectrumRow> rows;
    if (gamma_grid.empty()) {
        for (int n = 1; n <= n_max; ++n) {
            const auto [m, pl] = dressed_spectrum(p, n);
            rows.push_back({p.gamma_diss(), p.theta, n, Branch::minus, m.value});
            rows.push_back({p.gamma_diss(), p.theta, n, Branch::plus, pl.value});
        }
    } else {
        rows = spectra_table(p, parse_grid(gamma_grid), n_max);
    }
    const auto meta = base_meta("spectra", cfg);
    write_or_print(
        output, [&](std::ostream& o) { write_spectra_csv(o, rows, meta); },
        [&] { write_spectra_csv(rows, meta, output); }, out);
    return kOk;
}

int cmd_cmax(const Common& common, const std::string& gamma_grid, double delta_lo, double delta_hi,
             std::size_t coarse, double refine_tol, const std::string& output, std::ostream& out,
             std::ostream& err) {
    const RunConfig cfg = resolve(common, {}, err);
    const CmaxOptions opts{delta_lo, delta_hi, coarse, refine_tol};
    std::vector<CmaxPoint> pts;
    try {
        pts = cmax_scan(cfg.system, parse_grid(gamma_grid), opts, cfg.magnon_rabi, cfg.solver,
                        resolved_threads(common, cfg));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("cmax", 0, e.what());
    }
    auto meta = base_meta("cmax", cfg);
    meta["scan"] = {{"delta_lo", delta_lo}, {"delta_hi", delta_hi}, {"coarse_count", coarse},
                    {"refine_tol", refine_tol}};
    if (cfg.magnon_rabi) meta["magnon_rabi"] = *cfg.magnon_rabi;
    write_or_print(
        output, [&](std::ostream& o) { write_cmax_csv(o, pts, meta); },
        [&] { write_cmax_csv(pts, meta, output); }, out);
    return kOk;
}

int cmd_figure(const Common& common, const std::string& name, const std::string& out_dir, std::ostream& out,
               std::ostream& err) {
    namespace fs = std::filesystem;
    const RunConfig cfg = resolve(common, {}, err);
    const int threads = resolved_threads(common, cfg);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError(out_dir, ec.message());
    auto path = [&](const std::string& file) { return (fs::path(out_dir) / file).string(); };

    // Presets fix the grid; solver options and truncation come from the config.
    auto prepare = [&](SweepSpec s) {
        s.solver = cfg.solver;
        s.base.n_fock = cfg.system.n_fock;
        return s;
    };

    int rc = kOk;
    auto sweep_to = [&](const SweepSpec& s, const std::string& file) {
        const auto r = run_sweep(prepare(s), threads);
        write_csv(r, path(file));
        out << "wrote " << path(file) << " (" << r.rows.size() << " rows)\n";
        if (r.failures() > 0) {
            err << "nrmb: " << r.failures() << " failed points in " << file << "\n";
            rc = kSolverFailure;
        }
        return r;
    };

    if (name == "2a") {
        sweep_to(presets::fig2a(), "fig2a.csv");
    } else if (name == "2b") {
        sweep_to(presets::fig2b(), "fig2b.csv");
    } else if (name == "2c") {
        sweep_to(presets::fig2c(), "fig2c.csv");
        sweep_to(presets::fig2c_reciprocal(), "fig2c_reciprocal.csv");
    } else if (name == "3a") {
        sweep_to(presets::fig3a(), "fig3a.csv");
    } else if (name == "3b") {
        SystemParams base;
        base.n_fock = cfg.system.n_fock;
        const auto pts = cmax_scan(base, presets::fig3b_gammas(), {}, 0.1, cfg.solver, threads);
        auto meta = base_meta("cmax", cfg);
        meta["figure"] = "3b";
        write_cmax_csv(pts, meta, path("fig3b.csv"));
        out << "gamma_diss  c_max   delta_max  g2_fwd   g2_bwd\n";
        for (const auto& p : pts) {
            char line[128];
            std::snprintf(line, sizeof line, "%6.2f  %7.4f  %8.3f  %7.4f  %7.4f\n", p.gamma_diss, p.c_max,
                          p.delta_max, p.g_fwd, p.g_bwd);
            out << line;
        }
        out << "wrote " << path("fig3b.csv") << "\n";
    } else if (name == "4") {
        SystemParams base;
        base.n_fock = cfg.system.n_fock;
        const auto rows = spectra_table(base, presets::fig4_gammas(), 2);
        auto meta = base_meta("spectra", cfg);
        meta["figure"] = "4ab";
        write_spectra_csv(rows, meta, path("fig4ab.csv"));
        out << "wrote " << path("fig4ab.csv") << " (" << rows.size() << " rows)\n";
        sweep_to(presets::fig4c(), "fig4c.csv");
    } else if (name == "5") {
        const SweepSpec slice = prepare(presets::fig2c());
        const auto cavity = presets::fig5_cavity(slice.base);
        auto [two, three] = fig5_compare(slice, cavity, threads);
        write_csv(two, path("fig5_two_mode.csv"));
        write_csv(three, path("fig5_three_mode.csv"));
        std::size_t flips = 0;
        for (std::size_t i = 0; i < two.rows.size(); ++i) {
            if ((two.rows[i].g2 < 1.0) != (three.rows[i].g2 < 1.0)) ++flips;
        }
        out << "wrote " << path("fig5_two_mode.csv") << " and " << path("fig5_three_mode.csv") << "\n"
            << "classification mismatches: " << flips << " of " << two.rows.size() << "\n";
        if (two.failures() + three.failures() > 0) rc = kSolverFailure;
    } else {
        throw ConfigError("figure", 0, "unknown figure '" + name + "' (expected 2a, 2b, 2c, 3a, 3b, 4 or 5)");
    }
    return rc;
}

int cmd_validate(std::ostream& out) {
    bool ok = true;
    for (const auto& c : run_invariant_suite()) {
        out << (c.passed ? "PASS  " : "FAIL  ") << c.name << "  (" << c.detail << ")\n";
        ok = ok && c.passed;
    }
    return ok ? kOk : kSolverFailure;
}

}  // namespace nrmb::cli
