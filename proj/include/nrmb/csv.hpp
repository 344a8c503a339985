// csv.hpp — self-describing CSV output.
//
// Every file starts with one "# meta: {json}" line followed by a column header.
// Numbers are written with 17 significant digits ("%.16e"); NaN is written as
// "nan". Row order is the order of the in-memory result, so identical inputs
// give byte-identical files.

#pragma once

#include "nrmb/sweep.hpp"

#include <json.hpp>

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nrmb {

class IoError : public std::runtime_error {
public:
    IoError(const std::string& path, const std::string& what);
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

inline constexpr const char* kSweepColumns = "delta,gamma_diss,theta,g2,log10_g2,occupation,contrast,residual";
inline constexpr const char* kCmaxColumns = "gamma_diss,c_max,delta_max,g2_fwd,g2_bwd";
inline constexpr const char* kSpectraColumns = "gamma_diss,theta,n,branch,re,im";

std::string format_number(double v);

void write_sweep_csv(std::ostream& out, const SweepResult& result);
void write_cmax_csv(std::ostream& out, const std::vector<CmaxPoint>& points, const nlohmann::json& meta);
void write_spectra_csv(std::ostream& out, const std::vector<SpectrumRow>& rows, const nlohmann::json& meta);

// File variants; the file is written in full or an IoError naming the path is thrown.
void write_csv(const SweepResult& result, const std::string& path);
void write_cmax_csv(const std::vector<CmaxPoint>& points, const nlohmann::json& meta, const std::string& path);
void write_spectra_csv(const std::vector<SpectrumRow>& rows, const nlohmann::json& meta, const std::string& path);

}  // namespace nrmb
