// liouvillian.hpp — vectorized master equation, steady-state solvers and an
// RK4 time-evolution oracle.
//
// Vectorization is column-stacking: vec(ρ)[i + j·d] = ρ(i, j), so
// vec(AρB) = (Bᵀ ⊗ A) vec(ρ). The dissipator follows the convention
// L[f]ρ = 2fρf† − f†fρ − ρf†f with no ½, i.e. a channel of rate r empties
// a population at rate 2r.

#pragma once

#include "nrmb/hilbert.hpp"
#include "nrmb/model.hpp"

#include <Eigen/Sparse>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nrmb {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class DegenerateKernel : public SolverError {
public:
    using SolverError::SolverError;
};
class NonConvergent : public SolverError {
public:
    using SolverError::SolverError;
};
class StepSizeTooLarge : public SolverError {
public:
    using SolverError::SolverError;
};
class DimensionTooLarge : public SolverError {
public:
    using SolverError::SolverError;
};

// Largest Hilbert-space dimension the solvers accept (three-mode default is 56).
inline constexpr std::size_t kMaxHilbertDim = 64;

struct Liouvillian {
    SparseMatrix matrix;  // d² × d²
    Dims dims;
    LindbladModel source;

    std::size_t dim() const noexcept { return dims_product(dims); }
    double max_abs() const;
};

Liouvillian build_liouvillian(const LindbladModel& model);

// Dense reference assembly of the same superoperator, written directly from
// the Kronecker formulas. Kept for cross-checking the sparse path.
Matrix build_liouvillian_dense(const LindbladModel& model);

// Hamiltonian part only: −i(I ⊗ H − Hᵀ ⊗ I).
SparseMatrix commutator_superoperator(const QuantumOperator& h);

// ‖vec(I)† · L‖_max / ‖L‖_max
double trace_preservation_error(const Liouvillian& liou);

Vector vectorize(const Matrix& m);
Matrix unvectorize(const Vector& v, std::size_t d);

enum class SolveMethod { null_space, trace_replacement, long_time };
std::string to_string(SolveMethod method);

struct SolverOptions {
    double residual_tol = 1e-8;   // relative to max(1, ‖L‖_max)
    double kernel_ratio = 1e3;    // σ₂(L) / σ₁(L) lower bound
    bool check_kernel = true;
    int kernel_iterations = 12;

    bool operator==(const SolverOptions&) const = default;
};

struct SteadyState {
    DensityMatrix rho;
    double residual = 0.0;  // ‖L vec(ρ)‖₂
    SolveMethod method = SolveMethod::trace_replacement;
};

// "umfpack" or "eigen-sparselu", fixed at build time.
const char* sparse_lu_backend();

// Trace-replacement solve: row 0 of L is replaced by the trace functional
// and the system is solved with a sparse LU.
SteadyState steady_state(const Liouvillian& liou, const SolverOptions& opts = {});

// Cross-check: right singular vector of the smallest singular value of the
// dense L. Cubic in d², meant for d ≤ 16.
SteadyState steady_state_null_space(const Liouvillian& liou, const SolverOptions& opts = {});

// Real part of the slowest nonzero Liouvillian decay, estimated as the
// smallest |Im E| over the non-ground eigenvalues of the undriven no-jump
// Hamiltonian (exact for the undriven model, where jumps only lower the
// excitation number).
double slowest_decay_rate(const LindbladModel& model);

// Upper estimate of the spectral radius of L by power iteration.
double spectral_radius_estimate(const Liouvillian& liou, int iterations = 60);

// Classical RK4 on dρ/dt = L(ρ). Requires dt · spectral radius < 1.
DensityMatrix evolve(const LindbladModel& model, const DensityMatrix& rho0, double t_final, double dt);

// Long-time evolution from rho0 to t = 20 / slowest_decay_rate, step chosen
// from the spectral radius estimate.
SteadyState steady_state_long_time(const LindbladModel& model, const DensityMatrix& rho0);

}  // namespace nrmb
