// observables.hpp — magnon statistics and dressed-state spectra.

#pragma once

#include "nrmb/hilbert.hpp"
#include "nrmb/liouvillian.hpp"
#include "nrmb/model.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nrmb {

class VacuumState : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline constexpr double kVacuumThreshold = 1e-12;

// <b†b>; the magnon is subsystem 1.
double occupation(const DensityMatrix& rho);

// <b†b†bb> / <b†b>²
double g2_zero(const DensityMatrix& rho);

// |g_fwd - g_bwd| / (g_fwd + g_bwd)
double contrast(double g_fwd, double g_bwd);

struct CorrelationRecord {
    double theta = 0.0;
    double delta = 0.0;
    double gamma_diss = 0.0;
    double g2 = 0.0;
    double occupation = 0.0;
    double residual = 0.0;
};

// Steady-state g²(0) of the two-mode model (or the three-mode model when a
// cavity is given).
CorrelationRecord solve_correlation(const SystemParams& params, const std::optional<CavityParams>& cavity = {},
                                    const SolverOptions& opts = {});

enum class Branch { minus, plus };
std::string to_string(Branch b);

struct DressedEigenvalue {
    int n = 0;
    Branch branch = Branch::minus;
    Complex value;
};

// Hermitian ladder ω_{n,±} = nω_b + δ/2 ± ½√(δ² + 4nλ²), δ = ω_q − ω_b.
// Returns (ω_{n,−}, ω_{n,+}).
std::pair<double, double> hermitian_spectrum(const SystemParams& params, int n);

// Complex ω_{n,±} = nω̃_b + Δ̃/2 ± ½√(Δ̃² + 4n·c₊c₋) with ω̃ = ω − i·(total decay),
// c± = λ − iΓe^{±iΘ}. For Θ ∈ {0, π}, c₊c₋ = (λ − iΓe^{iΘ})². The square
// root is continued from the Hermitian limit, so ± keep their Hermitian
// ancestors' labels. Returns (minus, plus).
std::pair<DressedEigenvalue, DressedEigenvalue> dressed_spectrum(const SystemParams& params, int n);

// Eigenvalues of the n-excitation blocks of effective_hamiltonian() for
// n = 0..n_max, labelled by minimal-distance pairing with dressed_spectrum.
// Block 0 contributes the single eigenvalue 0.
std::vector<DressedEigenvalue> dressed_spectrum_numeric(const SystemParams& params, int n_max);

}  // namespace nrmb
