#include "nrmb/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace nrmb {

ConfigError::ConfigError(const std::string& key_path, int line, const std::string& message)
    : std::runtime_error(key_path + (line > 0 ? " (line " + std::to_string(line) + ")" : std::string()) + ": " +
                         message),
      key_path_(key_path),
      line_(line) {}

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"system",
         {"omega_q", "omega_b", "delta", "omega_d", "lambda", "gamma_in", "kappa_in", "tau", "gamma_diss", "mu", "nu",
          "theta", "phi", "xi", "magnon_rabi", "drive"}},
        {"cavity", {"omega_c", "cavity_detuning", "beta_in", "zeta"}},
        {"sweep", {"axis1", "axis2", "directions"}},
        {"solver", {"n_fock", "n_fock_c", "residual_tol", "kernel_ratio", "check_kernel", "method", "threads"}},
        {"output", {"path"}},
    };
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Entry {
    std::string value;
    int line = 0;
};

class Document {
public:
    explicit Document(const std::string& text) {
        std::istringstream in(text);
        std::string raw;
        std::string section;
        int line = 0;
        while (std::getline(in, raw)) {
            ++line;
            std::string s = trim(strip_comment(raw));
            if (s.empty()) continue;
            if (s.front() == '[') {
                if (s.back() != ']') throw ConfigError(s, line, "malformed section header");
                section = trim(s.substr(1, s.size() - 2));
                if (!schema().contains(section)) throw ConfigError(section, line, "unknown section");
                sections_.insert(section);
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError(s, line, "expected 'key = value'");
            const std::string key = trim(s.substr(0, eq));
            if (section.empty()) throw ConfigError(key, line, "key outside of any section");
            const std::string path = section + "." + key;
            if (!schema().at(section).contains(key)) throw ConfigError(path, line, "unknown key");
            if (entries_.contains(path)) throw ConfigError(path, line, "duplicate key");
            std::string value = trim(s.substr(eq + 1));
            if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
                value = value.substr(1, value.size() - 2);
            }
            entries_[path] = {value, line};
        }
    }

    bool has_section(const std::string& name) const { return sections_.contains(name); }
    bool has(const std::string& path) const { return entries_.contains(path); }
    const Entry& at(const std::string& path) const { return entries_.at(path); }

private:
    static std::string strip_comment(const std::string& s) {
        bool quoted = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '"') quoted = !quoted;
            if (s[i] == '#' && !quoted) return s.substr(0, i);
        }
        return s;
    }

    std::map<std::string, Entry> entries_;
    std::set<std::string> sections_;
};

double parse_number(const std::string& text, const std::string& path, int line) {
    if (text == "pi") return kPi;
    if (text == "-pi") return -kPi;
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || text.empty()) {
        throw ConfigError(path, line, "expected a number, got '" + text + "'");
    }
    if (!std::isfinite(v)) throw ConfigError(path, line, "value must be finite");
    return v;
}

std::size_t parse_count(const std::string& text, const std::string& path, int line) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError(path, line, "expected a nonnegative integer, got '" + text + "'");
    }
    return v;
}

bool parse_bool(const std::string& text, const std::string& path, int line) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw ConfigError(path, line, "expected true or false, got '" + text + "'");
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Resolver {
public:
    Resolver(const Document& doc, std::vector<std::string>& explain) : doc_(doc), explain_(explain) {}

    bool given(const std::string& path) const { return doc_.has(path); }
    int line(const std::string& path) const { return doc_.has(path) ? doc_.at(path).line : 0; }

    double number(const std::string& path, double fallback) {
        if (!doc_.has(path)) {
            note(path, format_double(fallback), 0);
            return fallback;
        }
        const auto& e = doc_.at(path);
        const double v = parse_number(e.value, path, e.line);
        note(path, format_double(v), e.line);
        return v;
    }

    double nonnegative(const std::string& path, double fallback) {
        const double v = number(path, fallback);
        if (v < 0.0) throw ConfigError(path, line(path), "must be nonnegative, got " + format_double(v));
        return v;
    }

    std::size_t count(const std::string& path, std::size_t fallback) {
        if (!doc_.has(path)) {
            note(path, std::to_string(fallback), 0);
            return fallback;
        }
        const auto& e = doc_.at(path);
        const std::size_t v = parse_count(e.value, path, e.line);
        note(path, std::to_string(v), e.line);
        return v;
    }

    bool boolean(const std::string& path, bool fallback) {
        if (!doc_.has(path)) {
            note(path, fallback ? "true" : "false", 0);
            return fallback;
        }
        const auto& e = doc_.at(path);
        const bool v = parse_bool(e.value, path, e.line);
        note(path, e.value, e.line);
        return v;
    }

    std::string string(const std::string& path, const std::string& fallback) {
        if (!doc_.has(path)) {
            note(path, fallback, 0);
            return fallback;
        }
        const auto& e = doc_.at(path);
        note(path, e.value, e.line);
        return e.value;
    }

    void exclusive(const std::string& a, const std::string& b) const {
        if (given(a) && given(b)) throw ConfigError(b, line(b), "cannot be combined with " + a);
    }

private:
    void note(const std::string& path, const std::string& value, int line) {
        explain_.push_back(path + " = " + value + (line > 0 ? "  (line " + std::to_string(line) + ")" : "  (default)"));
    }

    const Document& doc_;
    std::vector<std::string>& explain_;
};

Axis parse_axis(const std::string& text, const std::string& path, int line) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(trim(item));
    if (parts.size() != 4) throw ConfigError(path, line, "expected name:start:stop:count, got '" + text + "'");
    Axis a{parts[0], parse_number(parts[1], path, line), parse_number(parts[2], path, line),
           parse_count(parts[3], path, line)};
    if (a.name != "delta" && a.name != "gamma_diss" && a.name != "xi" && a.name != "theta") {
        throw ConfigError(path, line, "unknown axis '" + a.name + "' (expected delta, gamma_diss, xi or theta)");
    }
    if (a.count < 1) throw ConfigError(path, line, "axis count must be at least 1");
    if (a.name == "gamma_diss" && std::min(a.start, a.stop) < 0.0) {
        throw ConfigError(path, line, "gamma_diss axis must be nonnegative");
    }
    return a;
}

std::vector<Direction> parse_directions(const std::string& text, const std::string& path, int line) {
    if (text == "both") return {Direction::forward, Direction::backward};
    std::vector<Direction> dirs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item == "forward") {
            dirs.push_back(Direction::forward);
        } else if (item == "backward") {
            dirs.push_back(Direction::backward);
        } else {
            throw ConfigError(path, line, "unknown direction '" + item + "'");
        }
    }
    std::sort(dirs.begin(), dirs.end());
    if (dirs.empty() || std::adjacent_find(dirs.begin(), dirs.end()) != dirs.end()) {
        throw ConfigError(path, line, "directions must be forward and/or backward, each at most once");
    }
    return dirs;
}

SolveMethod parse_method(const std::string& text, const std::string& path, int line) {
    if (text == "trace-replacement") return SolveMethod::trace_replacement;
    if (text == "null-space") return SolveMethod::null_space;
    throw ConfigError(path, line, "unknown method '" + text + "' (expected trace-replacement or null-space)");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    const Document doc(text);
    RunConfig cfg;
    Resolver r(doc, cfg.explain);
    auto& p = cfg.system;

    r.exclusive("system.delta", "system.omega_d");
    r.exclusive("system.tau", "system.gamma_diss");
    r.exclusive("system.xi", "system.magnon_rabi");

    p.omega_b = r.number("system.omega_b", 5000.0);
    p.omega_q = r.number("system.omega_q", p.omega_b);
    if (r.given("system.omega_d")) {
        p.omega_d = r.number("system.omega_d", p.omega_b);
    } else {
        p.set_detuning(r.number("system.delta", 0.0));
    }
    p.lambda = r.number("system.lambda", 10.0);
    p.gamma_in = r.nonnegative("system.gamma_in", 1.0);
    p.kappa_in = r.nonnegative("system.kappa_in", 1.0);
    p.mu = r.nonnegative("system.mu", 1.0);
    p.nu = r.nonnegative("system.nu", 1.0);
    if (r.given("system.tau")) {
        p.tau = r.nonnegative("system.tau", 5.0);
    } else {
        const double g = r.nonnegative("system.gamma_diss", 5.0);
        if (p.mu * p.nu == 0.0 && g > 0.0) {
            throw ConfigError("system.gamma_diss", r.line("system.gamma_diss"), "requires mu·nu > 0");
        }
        p.tau = p.mu * p.nu == 0.0 ? 0.0 : g / (p.mu * p.nu);
    }
    p.theta = r.number("system.theta", 0.0);
    p.phi = r.number("system.phi", 0.0);
    try {
        p.drive = drive_mode_from_string(r.string("system.drive", "port"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("system.drive", r.line("system.drive"), e.what());
    }
    if (r.given("system.xi")) {
        p.xi = r.nonnegative("system.xi", 0.0);
        cfg.magnon_rabi.reset();
    } else {
        cfg.magnon_rabi = r.nonnegative("system.magnon_rabi", 0.1);
        if (p.mu == 0.0) throw ConfigError("system.mu", r.line("system.mu"), "magnon drive requires mu > 0");
        p.set_magnon_rabi(*cfg.magnon_rabi);
    }

    p.n_fock = r.count("solver.n_fock", 7);
    if (p.n_fock < 3) throw ConfigError("solver.n_fock", r.line("solver.n_fock"), "must be at least 3");
    const std::size_t n_fock_c = r.count("solver.n_fock_c", 4);
    if (n_fock_c < 2) throw ConfigError("solver.n_fock_c", r.line("solver.n_fock_c"), "must be at least 2");
    cfg.solver.residual_tol = r.number("solver.residual_tol", 1e-8);
    if (!(cfg.solver.residual_tol > 0.0)) {
        throw ConfigError("solver.residual_tol", r.line("solver.residual_tol"), "must be positive");
    }
    cfg.solver.kernel_ratio = r.number("solver.kernel_ratio", 1e3);
    if (!(cfg.solver.kernel_ratio > 0.0)) {
        throw ConfigError("solver.kernel_ratio", r.line("solver.kernel_ratio"), "must be positive");
    }
    cfg.solver.check_kernel = r.boolean("solver.check_kernel", true);
    cfg.method = parse_method(r.string("solver.method", "trace-replacement"), "solver.method", r.line("solver.method"));
    cfg.threads = static_cast<int>(r.count("solver.threads", 0));

    if (doc.has_section("cavity")) {
        r.exclusive("cavity.omega_c", "cavity.cavity_detuning");
        CavityParams c;
        if (r.given("cavity.omega_c")) {
            c.omega_c = r.number("cavity.omega_c", p.omega_b + 1000.0);
        } else {
            c.omega_c = p.omega_b + r.number("cavity.cavity_detuning", 1000.0);
        }
        c.beta_in = r.nonnegative("cavity.beta_in", 1.0);
        c.zeta = r.nonnegative("cavity.zeta", 1.0);
        c.n_fock_c = n_fock_c;
        if (2 * p.n_fock * c.n_fock_c > kMaxHilbertDim) {
            throw ConfigError("solver.n_fock_c", r.line("solver.n_fock_c"),
                              "three-mode dimension exceeds " + std::to_string(kMaxHilbertDim));
        }
        cfg.cavity = c;
    }

    for (const char* key : {"sweep.axis1", "sweep.axis2"}) {
        if (r.given(key)) cfg.axes.push_back(parse_axis(r.string(key, ""), key, r.line(key)));
    }
    if (r.given("sweep.axis2") && !r.given("sweep.axis1")) {
        throw ConfigError("sweep.axis2", r.line("sweep.axis2"), "axis2 given without axis1");
    }
    if (cfg.axes.size() == 2 && cfg.axes[0].name == cfg.axes[1].name) {
        throw ConfigError("sweep.axis2", r.line("sweep.axis2"), "duplicate axis '" + cfg.axes[1].name + "'");
    }
    cfg.directions = parse_directions(r.string("sweep.directions", "forward,backward"), "sweep.directions",
                                      r.line("sweep.directions"));
    cfg.output = r.string("output.path", "");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, 0, "cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    const auto& p = cfg.system;
    std::ostringstream out;
    auto kv = [&](const char* key, const std::string& value) { out << key << " = " << value << "\n"; };
    auto num = [&](const char* key, double v) { kv(key, format_double(v)); };

    out << "[system]\n";
    num("omega_q", p.omega_q);
    num("omega_b", p.omega_b);
    num("omega_d", p.omega_d);
    num("lambda", p.lambda);
    num("gamma_in", p.gamma_in);
    num("kappa_in", p.kappa_in);
    num("tau", p.tau);
    num("mu", p.mu);
    num("nu", p.nu);
    num("theta", p.theta);
    num("phi", p.phi);
    // set_magnon_rabi may have switched port -> direct; write the requested mode.
    if (cfg.magnon_rabi) {
        const bool fell_back = p.drive == DriveMode::direct && p.kappa_ex() == 0.0;
        kv("drive", fell_back ? "port" : to_string(p.drive));
        num("magnon_rabi", *cfg.magnon_rabi);
    } else {
        kv("drive", to_string(p.drive));
        num("xi", p.xi);
    }

    if (cfg.cavity) {
        out << "\n[cavity]\n";
        num("omega_c", cfg.cavity->omega_c);
        num("beta_in", cfg.cavity->beta_in);
        num("zeta", cfg.cavity->zeta);
    }

    out << "\n[sweep]\n";
    for (std::size_t i = 0; i < cfg.axes.size(); ++i) {
        const auto& a = cfg.axes[i];
        const std::string key = "axis" + std::to_string(i + 1);
        kv(key.c_str(), "\"" + a.name + ":" + format_double(a.start) + ":" + format_double(a.stop) + ":" +
                            std::to_string(a.count) + "\"");
    }
    std::string dirs;
    for (auto d : cfg.directions) dirs += (dirs.empty() ? "" : ",") + to_string(d);
    kv("directions", dirs);

    out << "\n[solver]\n";
    kv("n_fock", std::to_string(p.n_fock));
    kv("n_fock_c", std::to_string(cfg.cavity ? cfg.cavity->n_fock_c : 4));
    num("residual_tol", cfg.solver.residual_tol);
    num("kernel_ratio", cfg.solver.kernel_ratio);
    kv("check_kernel", cfg.solver.check_kernel ? "true" : "false");
    kv("method", to_string(cfg.method));
    kv("threads", std::to_string(cfg.threads));

    if (!cfg.output.empty()) {
        out << "\n[output]\n";
        kv("path", "\"" + cfg.output + "\"");
    }
    return out.str();
}

SweepSpec RunConfig::sweep_spec() const {
    SweepSpec s;
    s.base = system;
    s.cavity = cavity;
    s.axes = axes;
    s.directions = directions;
    s.magnon_rabi = magnon_rabi;
    s.solver = solver;
    return s;
}

bool RunConfig::operator==(const RunConfig& rhs) const {
    return system == rhs.system && cavity == rhs.cavity && magnon_rabi == rhs.magnon_rabi && axes == rhs.axes &&
           directions == rhs.directions && solver == rhs.solver && method == rhs.method && threads == rhs.threads &&
           output == rhs.output;
}

int threads_from_env(int fallback) {
    const char* env = std::getenv("SIM_THREADS");
    if (!env || !*env) return fallback;
    int v = 0;
    const std::string s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v < 0) return fallback;
    return v;
}

}  // namespace nrmb
