#include "nrmb/config.hpp"
#include "nrmb/csv.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace nrmb;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string expect_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "no error";
}

}  // namespace

TEST_CASE("empty document gives the Fig. 2 defaults") {
    const RunConfig cfg = parse_config("");
    const auto& p = cfg.system;
    CHECK(p.omega_q == p.omega_b);
    CHECK(p.lambda == 10.0);
    CHECK(p.gamma_in == 1.0);
    CHECK(p.kappa_in == 1.0);
    CHECK(p.mu == 1.0);
    CHECK(p.nu == 1.0);
    CHECK(p.tau == p.gamma_diss());
    CHECK(p.phi == 0.0);
    CHECK(p.xi_b() == doctest::Approx(0.1));
    CHECK(!cfg.cavity);
    CHECK(cfg.directions.size() == 2);
    CHECK(cfg.method == SolveMethod::trace_replacement);
    CHECK(!cfg.explain.empty());
}

TEST_CASE("constraint violations name the key and line") {
    const std::string msg = expect_error("[system]\n\ngamma_in = -1\n");
    CHECK(msg.find("system.gamma_in") != std::string::npos);
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("nonnegative") != std::string::npos);

    try {
        parse_config("[system]\ngamma_in = -1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key_path() == "system.gamma_in");
        CHECK(e.line() == 2);
    }
}

TEST_CASE("unknown keys, sections and malformed values are rejected") {
    CHECK(expect_error("[system]\nomega_x = 1\n").find("system.omega_x (line 2): unknown key") != std::string::npos);
    CHECK(expect_error("[plot]\n").find("unknown section") != std::string::npos);
    CHECK(expect_error("lambda = 3\n").find("outside of any section") != std::string::npos);
    CHECK(expect_error("[system]\nlambda = ten\n").find("expected a number") != std::string::npos);
    CHECK(expect_error("[system]\nlambda = 1\nlambda = 2\n").find("duplicate") != std::string::npos);
    CHECK(expect_error("[system]\ndelta = 1\nomega_d = 2\n").find("cannot be combined") != std::string::npos);
    CHECK(expect_error("[solver]\ncheck_kernel = yes\n").find("true or false") != std::string::npos);
    CHECK(expect_error("[solver]\nn_fock = 2\n").find("at least 3") != std::string::npos);
    CHECK(expect_error("[sweep]\naxis1 = \"omega:0:1:3\"\n").find("unknown axis") != std::string::npos);
    CHECK(expect_error("[sweep]\naxis1 = \"delta:0:1\"\n").find("name:start:stop:count") != std::string::npos);
    CHECK(expect_error("[sweep]\ndirections = sideways\n").find("unknown direction") != std::string::npos);
    CHECK(expect_error("[solver]\nmethod = magic\n").find("unknown method") != std::string::npos);
    CHECK(expect_error("[system]\ndrive = pulled\n").find("system.drive") != std::string::npos);
}

TEST_CASE("cavity section enables the three-mode model") {
    const RunConfig cfg = parse_config("[cavity]\nzeta = 1\nbeta_in = 1\n");
    REQUIRE(cfg.cavity);
    CHECK(cfg.cavity->zeta == 1.0);
    CHECK(cfg.cavity->beta_in == 1.0);
    CHECK(cfg.cavity->omega_c == cfg.system.omega_b + 1000.0);
    CHECK(cfg.sweep_spec().cavity == cfg.cavity);

    CHECK(expect_error("[cavity]\n[solver]\nn_fock_c = 6\n").find("exceeds") != std::string::npos);
}

TEST_CASE("values, comments and the pi literal") {
    const RunConfig cfg = parse_config(
        "# leading comment\n"
        "[system]\n"
        "delta = -10.2   # trailing comment\n"
        "theta = pi\n"
        "gamma_diss = 3\n"
        "[sweep]\n"
        "axis1 = \"gamma_diss:0:10:51\"\n"
        "axis2 = \"delta:-30:30:121\"\n"
        "directions = backward\n"
        "[solver]\n"
        "threads = 2\n"
        "[output]\n"
        "path = \"out # not a comment.csv\"\n");
    CHECK(cfg.system.detuning() == doctest::Approx(-10.2));
    CHECK(cfg.system.theta == kPi);
    CHECK(cfg.system.tau == 3.0);
    REQUIRE(cfg.axes.size() == 2);
    CHECK(cfg.axes[1].count == 121);
    CHECK(cfg.directions == std::vector<Direction>{Direction::backward});
    CHECK(cfg.threads == 2);
    CHECK(cfg.output == "out # not a comment.csv");
    CHECK(cfg.sweep_spec().grid_size() == 51 * 121);
}

TEST_CASE("serialization round-trips") {
    const std::vector<std::string> docs = {
        "",
        "[system]\ndelta = -10.2\ntheta = pi\ngamma_diss = 7.3\nphi = 0.1\n",
        "[system]\nxi = 0.03\ntau = 0\nomega_q = 5001.5\n[solver]\nmethod = null-space\nn_fock = 5\n",
        "[system]\ntau = 0\n",
        "[system]\ndrive = direct\nmu = 0.5\nnu = 2\n[cavity]\ncavity_detuning = 333.3\nzeta = 0.2\n"
        "[sweep]\naxis1 = \"delta:-1e-3:2.5:7\"\ndirections = forward\n[output]\npath = \"a.csv\"\n",
    };
    for (const auto& d : docs) {
        const RunConfig cfg = parse_config(d);
        const std::string text = serialize_config(cfg);
        const RunConfig back = parse_config(text);
        CHECK_MESSAGE(back == cfg, text);
        CHECK(serialize_config(back) == text);
    }
}

TEST_CASE("SIM_THREADS override") {
    ::setenv("SIM_THREADS", "3", 1);
    CHECK(threads_from_env(0) == 3);
    ::setenv("SIM_THREADS", "lots", 1);
    CHECK(threads_from_env(5) == 5);
    ::unsetenv("SIM_THREADS");
    CHECK(threads_from_env(4) == 4);
}

TEST_CASE("load_config reports missing files") {
    CHECK_THROWS_AS(load_config("/nonexistent/run.conf"), ConfigError);
}

TEST_CASE("sweep CSV layout") {
    SweepSpec s = parse_config("[system]\ngamma_diss = 5\n[sweep]\naxis1 = \"delta:-10.2:-10.2:1\"\n").sweep_spec();
    const auto r = run_sweep(s);
    std::ostringstream out;
    write_sweep_csv(out, r);
    const std::string text = out.str();

    std::istringstream in(text);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0].rfind("# meta: {", 0) == 0);
    CHECK(nlohmann::json::parse(lines[0].substr(8))["rows"] == 2);
    CHECK(lines[1] == kSweepColumns);
    CHECK(lines[2].rfind("-1.0199999999999999e+01,5.0000000000000000e+00,0.0000000000000000e+00,", 0) == 0);

    std::istringstream row(lines[3]);
    std::vector<std::string> cells;
    for (std::string c; std::getline(row, c, ',');) cells.push_back(c);
    REQUIRE(cells.size() == 8);
    CHECK(std::stod(cells[2]) == kPi);
    CHECK(std::stod(cells[3]) == r.rows[1].g2);  // 17 digits round-trip
    CHECK(std::stod(cells[4]) == doctest::Approx(std::log10(r.rows[1].g2)));
}

TEST_CASE("CSV output is byte-identical across runs") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "nrmb_csv_test";
    fs::create_directories(dir);
    SweepSpec s;
    s.axes = {{"delta", -20.0, 20.0, 5}};
    write_csv(run_sweep(s, 1), (dir / "a.csv").string());
    write_csv(run_sweep(s, 2), (dir / "b.csv").string());
    CHECK(read_file((dir / "a.csv").string()) == read_file((dir / "b.csv").string()));
    fs::remove_all(dir);
}

TEST_CASE("single-direction CSV writes nan contrast") {
    SweepSpec s;
    s.axes = {{"delta", -1.0, 1.0, 2}};
    s.directions = {Direction::forward};
    std::ostringstream out;
    write_sweep_csv(out, run_sweep(s));
    CHECK(out.str().find(",nan,") != std::string::npos);
}

TEST_CASE("I/O errors name the path") {
    SweepSpec s;
    s.axes = {{"delta", -1.0, 1.0, 2}};
    try {
        write_csv(run_sweep(s), "/nonexistent/dir/out.csv");
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(e.path() == "/nonexistent/dir/out.csv");
        CHECK(std::string(e.what()).find("/nonexistent/dir/out.csv") != std::string::npos);
    }
}

TEST_CASE("cmax and spectra CSV") {
    std::ostringstream out;
    write_cmax_csv(out, {{5.0, 0.9, -10.2, 1.6, 0.09}}, {{"kind", "cmax"}});
    CHECK(out.str() ==
          "# meta: {\"kind\":\"cmax\"}\ngamma_diss,c_max,delta_max,g2_fwd,g2_bwd\n"
          "5.0000000000000000e+00,9.0000000000000002e-01,-1.0199999999999999e+01,1.6000000000000001e+00,"
          "8.9999999999999997e-02\n");

    std::ostringstream sp;
    write_spectra_csv(sp, {{5.0, 0.0, 1, Branch::plus, Complex(5010.0, -11.0)}}, {});
    CHECK(sp.str().find("\n5.0000000000000000e+00,0.0000000000000000e+00,1,+,5.0100000000000000e+03,"
                        "-1.1000000000000000e+01\n") != std::string::npos);
    CHECK(format_number(std::nan("")) == "nan");
}
