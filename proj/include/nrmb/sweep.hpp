// sweep.hpp — parameter sweeps over steady-state correlations, C_max
// extraction, and the figure presets.
//
// run_sweep() distributes grid points over OpenMP threads and gathers results
// by index; run_sweep_serial() is the plain-loop reference. Both produce
// bitwise-identical results.

#pragma once

#include "nrmb/liouvillian.hpp"
#include "nrmb/model.hpp"
#include "nrmb/observables.hpp"

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nrmb {

inline constexpr const char* kToolVersion = "1.0.0";

enum class Direction { forward, backward };  // Θ = 0 (port 1), Θ = π (port 2)
double direction_theta(Direction d);
std::string to_string(Direction d);

struct Axis {
    std::string name;  // delta | gamma_diss | xi | theta
    double start = 0.0;
    double stop = 0.0;
    std::size_t count = 2;

    // Evenly spaced, endpoints exact; a one-point axis sits at `start`.
    double value(std::size_t i) const;

    bool operator==(const Axis&) const = default;
};

struct SweepSpec {
    SystemParams base;
    std::optional<CavityParams> cavity;
    std::vector<Axis> axes;
    std::vector<Direction> directions{Direction::forward, Direction::backward};
    // When set, xi is re-derived at every grid point so that the magnon Rabi
    // amplitude stays fixed. Ignored when xi itself is swept.
    std::optional<double> magnon_rabi = 0.1;
    SolverOptions solver;

    void validate() const;
    std::size_t grid_size() const;
    bool sweeps(const std::string& axis) const;
    // Directions actually solved; a swept theta replaces them with one pass.
    std::size_t passes() const;
};

struct SweepRow {
    double delta = 0.0;
    double gamma_diss = 0.0;
    double theta = 0.0;
    double xi = 0.0;
    double g2 = 0.0;
    double occupation = 0.0;
    double contrast = 0.0;  // NaN unless both directions solved at this point
    double residual = 0.0;
    DriveMode drive = DriveMode::port;
    bool ok = true;
    std::string error;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // point-major, forward before backward
    nlohmann::json meta;

    std::size_t failures() const;
};

// Parameters of grid point `point` (row-major over axes) for one direction.
SystemParams sweep_point_params(const SweepSpec& spec, std::size_t point, std::optional<Direction> direction);

// threads <= 0 uses the OpenMP default.
SweepResult run_sweep(const SweepSpec& spec, int threads = 0);
SweepResult run_sweep_serial(const SweepSpec& spec);

struct CmaxOptions {
    double delta_lo = -30.0;
    double delta_hi = 30.0;
    std::size_t coarse_count = 241;  // resolution 0.25
    double refine_tol = 0.05;
};

struct CmaxPoint {
    double gamma_diss = 0.0;
    double c_max = 0.0;
    double delta_max = 0.0;
    double g_fwd = 0.0;
    double g_bwd = 0.0;
};

// Bidirectional contrast at one detuning.
double contrast_at(const SystemParams& base, double delta, double gamma_diss, std::optional<double> magnon_rabi,
                   const SolverOptions& opts, double* g_fwd = nullptr, double* g_bwd = nullptr);

// Per Γ: coarse Δ grid, then golden-section refinement around the coarse
// maximizer. Ties between mirror maxima resolve to the smaller Δ.
std::vector<CmaxPoint> cmax_scan(const SystemParams& base, const std::vector<double>& gamma_grid,
                                 const CmaxOptions& opts = {}, std::optional<double> magnon_rabi = 0.1,
                                 const SolverOptions& solver = {}, int threads = 0);

// Two-mode vs three-mode runs on the same grid.
std::pair<SweepResult, SweepResult> fig5_compare(const SweepSpec& slice, const CavityParams& cavity, int threads = 0);

struct SpectrumRow {
    double gamma_diss = 0.0;
    double theta = 0.0;
    int n = 0;
    Branch branch = Branch::minus;
    Complex value;
};

// Analytic dressed eigenvalues for n = 1..n_max along a Γ grid (τ = Γ tie),
// both port phases.
std::vector<SpectrumRow> spectra_table(const SystemParams& base, const std::vector<double>& gamma_grid, int n_max);

// ---- presets --------------------------------------------------------------

namespace presets {

SweepSpec fig2a();            // Γ ∈ [0,10] × Δ ∈ [-30,30], Θ = 0
SweepSpec fig2b();            // same grid, Θ = π
SweepSpec fig3a();            // same grid, both directions (contrast)
SweepSpec fig2c();            // Γ = 5, Δ ∈ [-30,30] at 241 points, both directions
SweepSpec fig2c_reciprocal();  // τ = 0 reference on the fig2c slice
SweepSpec fig4c();            // Δ = 10, Γ ∈ [0,10], both directions
std::vector<double> fig3b_gammas();  // 1, 2, ..., 10
std::vector<double> fig4_gammas();   // 0, 0.1, ..., 10
CavityParams fig5_cavity(const SystemParams& base);  // β_in = 1, ζ = 1, ω_c − ω_b = 1000

}  // namespace presets

}  // namespace nrmb
