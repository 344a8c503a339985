#include "nrmb/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace nrmb {

IoError::IoError(const std::string& path, const std::string& what)
    : std::runtime_error(path + ": " + what), path_(path) {}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

namespace {

void write_meta(std::ostream& out, const nlohmann::json& meta) {
    out << "# meta: " << meta.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << "\n";
}

double log10_or_nan(double g2) { return g2 > 0.0 ? std::log10(g2) : std::nan(""); }

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
    std::ostringstream buf;
    body(buf);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path, "cannot open for writing");
    out << buf.str();
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    write_meta(out, result.meta);
    out << kSweepColumns << "\n";
    for (const auto& r : result.rows) {
        out << format_number(r.delta) << ',' << format_number(r.gamma_diss) << ',' << format_number(r.theta) << ','
            << format_number(r.g2) << ',' << format_number(log10_or_nan(r.g2)) << ','
            << format_number(r.occupation) << ',' << format_number(r.contrast) << ',' << format_number(r.residual)
            << "\n";
    }
}

void write_cmax_csv(std::ostream& out, const std::vector<CmaxPoint>& points, const nlohmann::json& meta) {
    write_meta(out, meta);
    out << kCmaxColumns << "\n";
    for (const auto& p : points) {
        out << format_number(p.gamma_diss) << ',' << format_number(p.c_max) << ',' << format_number(p.delta_max)
            << ',' << format_number(p.g_fwd) << ',' << format_number(p.g_bwd) << "\n";
    }
}

void write_spectra_csv(std::ostream& out, const std::vector<SpectrumRow>& rows, const nlohmann::json& meta) {
    write_meta(out, meta);
    out << kSpectraColumns << "\n";
    for (const auto& r : rows) {
        out << format_number(r.gamma_diss) << ',' << format_number(r.theta) << ',' << r.n << ','
            << to_string(r.branch) << ',' << format_number(r.value.real()) << ',' << format_number(r.value.imag())
            << "\n";
    }
}

void write_csv(const SweepResult& result, const std::string& path) {
    write_file(path, [&](std::ostream& o) { write_sweep_csv(o, result); });
}

void write_cmax_csv(const std::vector<CmaxPoint>& points, const nlohmann::json& meta, const std::string& path) {
    write_file(path, [&](std::ostream& o) { write_cmax_csv(o, points, meta); });
}

void write_spectra_csv(const std::vector<SpectrumRow>& rows, const nlohmann::json& meta, const std::string& path) {
    write_file(path, [&](std::ostream& o) { write_spectra_csv(o, rows, meta); });
}

}  // namespace nrmb
