#include "nrmb/liouvillian.hpp"

#include <Eigen/SVD>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>

#ifdef NRMB_HAVE_UMFPACK
#include <umfpack.h>
#endif

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace nrmb {

namespace {

SparseMatrix to_sparse(const Matrix& m) { return m.sparseView(); }

SparseMatrix sparse_identity(std::size_t d) {
    SparseMatrix id(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    id.setIdentity();
    return id;
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
    SparseMatrix out = Eigen::kroneckerProduct(a, b);
    return out;
}

void require_supported(std::size_t d) {
    if (d > kMaxHilbertDim) {
        throw DimensionTooLarge("Hilbert dimension " + std::to_string(d) + " exceeds the supported maximum " +
                                std::to_string(kMaxHilbertDim));
    }
}

// Sparse LU of a square complex matrix with solves against A and A^H.
class LuFactor {
public:
    explicit LuFactor(const SparseMatrix& a);
    ~LuFactor();
    LuFactor(const LuFactor&) = delete;
    LuFactor& operator=(const LuFactor&) = delete;

    bool ok() const noexcept { return ok_; }
    const std::string& error() const noexcept { return error_; }
    Vector solve(const Vector& b, bool refine = true) const { return apply(b, false, refine); }
    Vector solve_adjoint(const Vector& b, bool refine = true) const { return apply(b, true, refine); }

private:
    Vector apply(const Vector& b, bool adjoint, bool refine) const;

    const SparseMatrix& a_;
    bool ok_ = false;
    std::string error_;
#ifdef NRMB_HAVE_UMFPACK
    void* numeric_ = nullptr;
    double control_[UMFPACK_CONTROL];
#else
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
#endif
};

#ifdef NRMB_HAVE_UMFPACK

const double* interleaved(const SparseMatrix& a) { return reinterpret_cast<const double*>(a.valuePtr()); }

LuFactor::LuFactor(const SparseMatrix& a) : a_(a) {
    umfpack_zi_defaults(control_);
    double info[UMFPACK_INFO];
    const int n = static_cast<int>(a.rows());
    void* symbolic = nullptr;
    int status = umfpack_zi_symbolic(n, n, a.outerIndexPtr(), a.innerIndexPtr(), interleaved(a), nullptr, &symbolic,
                                     control_, info);
    if (status == UMFPACK_OK) {
        status = umfpack_zi_numeric(a.outerIndexPtr(), a.innerIndexPtr(), interleaved(a), nullptr, symbolic,
                                    &numeric_, control_, info);
    }
    umfpack_zi_free_symbolic(&symbolic);
    ok_ = status == UMFPACK_OK;
    if (status == UMFPACK_WARNING_singular_matrix) {
        error_ = "matrix is singular";
    } else if (!ok_) {
        error_ = "UMFPACK status " + std::to_string(status);
    }
}

LuFactor::~LuFactor() {
    if (numeric_) umfpack_zi_free_numeric(&numeric_);
}

Vector LuFactor::apply(const Vector& b, bool adjoint, bool refine) const {
    Vector x(b.size());
    double info[UMFPACK_INFO];
    double control[UMFPACK_CONTROL];
    std::copy(control_, control_ + UMFPACK_CONTROL, control);
    if (!refine) control[UMFPACK_IRSTEP] = 0;
    const int status = umfpack_zi_solve(adjoint ? UMFPACK_At : UMFPACK_A, a_.outerIndexPtr(), a_.innerIndexPtr(),
                                        interleaved(a_), nullptr, reinterpret_cast<double*>(x.data()), nullptr,
                                        reinterpret_cast<const double*>(b.data()), nullptr, numeric_, control, info);
    if (status != UMFPACK_OK) x.setConstant(Complex(std::numeric_limits<double>::quiet_NaN()));
    return x;
}

#else

LuFactor::LuFactor(const SparseMatrix& a) : a_(a) {
    lu_.analyzePattern(a);
    lu_.factorize(a);
    ok_ = lu_.info() == Eigen::Success;
    if (!ok_) error_ = lu_.lastErrorMessage();
}

LuFactor::~LuFactor() = default;

Vector LuFactor::apply(const Vector& b, bool adjoint, bool /*refine*/) const {
    auto& lu = const_cast<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>&>(lu_);
    return adjoint ? Vector(lu.adjoint().solve(b)) : Vector(lu.solve(b));
}

#endif

}  // namespace

const char* sparse_lu_backend() {
#ifdef NRMB_HAVE_UMFPACK
    return "umfpack";
#else
    return "eigen-sparselu";
#endif
}

double Liouvillian::max_abs() const {
    double m = 0.0;
    for (Eigen::Index k = 0; k < matrix.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(matrix, k); it; ++it) m = std::max(m, std::abs(it.value()));
    }
    return m;
}

SparseMatrix commutator_superoperator(const QuantumOperator& h) {
    const SparseMatrix hs = to_sparse(h.data());
    const SparseMatrix id = sparse_identity(h.dim());
    const SparseMatrix ht = hs.transpose();
    SparseMatrix out = Complex(0.0, -1.0) * (kron(id, hs) - kron(ht, id));
    return out;
}

Liouvillian build_liouvillian(const LindbladModel& model) {
    const std::size_t d = model.dim();
    require_supported(d);
    const SparseMatrix id = sparse_identity(d);

    SparseMatrix l = commutator_superoperator(model.hamiltonian);
    for (const auto& ch : model.channels) {
        if (ch.rate == 0.0) continue;
        const SparseMatrix f = to_sparse(ch.jump.data());
        const SparseMatrix fd = f.adjoint();
        const SparseMatrix fdf = fd * f;
        const SparseMatrix fdf_t = fdf.transpose();
        const SparseMatrix f_conj = f.conjugate();
        l += ch.rate * (2.0 * kron(f_conj, f) - kron(id, fdf) - kron(fdf_t, id));
    }
    l.prune(Complex(0.0));
    l.makeCompressed();
    return {std::move(l), model.dims, model};
}

Matrix build_liouvillian_dense(const LindbladModel& model) {
    const std::size_t d = model.dim();
    require_supported(d);
    const auto n = static_cast<Eigen::Index>(d);
    const Matrix id = Matrix::Identity(n, n);
    const Matrix& h = model.hamiltonian.data();

    Matrix l = -kI * (Matrix(Eigen::kroneckerProduct(id, h)) - Matrix(Eigen::kroneckerProduct(h.transpose(), id)));
    for (const auto& ch : model.channels) {
        const Matrix& f = ch.jump.data();
        const Matrix fdf = f.adjoint() * f;
        l += ch.rate * (2.0 * Matrix(Eigen::kroneckerProduct(f.conjugate(), f)) -
                        Matrix(Eigen::kroneckerProduct(id, fdf)) - Matrix(Eigen::kroneckerProduct(fdf.transpose(), id)));
    }
    return l;
}

double trace_preservation_error(const Liouvillian& liou) {
    const std::size_t d = liou.dim();
    Vector tr = Vector::Zero(static_cast<Eigen::Index>(d * d));
    for (std::size_t k = 0; k < d; ++k) tr(static_cast<Eigen::Index>(k * d + k)) = 1.0;
    const Vector row = liou.matrix.adjoint() * tr;
    const double scale = liou.max_abs();
    return scale == 0.0 ? 0.0 : row.cwiseAbs().maxCoeff() / scale;
}

Vector vectorize(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvectorize(const Vector& v, std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    return Eigen::Map<const Matrix>(v.data(), n, n);
}

std::string to_string(SolveMethod method) {
    switch (method) {
        case SolveMethod::null_space: return "null-space";
        case SolveMethod::trace_replacement: return "trace-replacement";
        case SolveMethod::long_time: return "long-time";
    }
    return "unknown";
}

namespace {

// Normalizes to unit trace, symmetrizes, and records the residual.
SteadyState finish(const Liouvillian& liou, Matrix rho, SolveMethod method, const SolverOptions& opts) {
    const Complex tr = rho.trace();
    if (std::abs(tr) == 0.0) throw NonConvergent("steady state has zero trace");
    rho /= tr;
    rho = 0.5 * (rho + rho.adjoint()).eval();

    SteadyState ss;
    ss.residual = (liou.matrix * vectorize(rho)).norm();
    ss.method = method;
    ss.rho = DensityMatrix(std::move(rho), liou.dims);

    const double bound = opts.residual_tol * std::max(1.0, liou.max_abs());
    if (!(ss.residual <= bound)) {
        throw NonConvergent("steady-state residual " + std::to_string(ss.residual) + " exceeds " +
                            std::to_string(bound));
    }
    return ss;
}

}  // namespace

SteadyState steady_state(const Liouvillian& liou, const SolverOptions& opts) {
    const std::size_t d = liou.dim();
    require_supported(d);
    const auto n = static_cast<Eigen::Index>(d * d);

    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(static_cast<std::size_t>(liou.matrix.nonZeros()) + d);
    for (Eigen::Index k = 0; k < liou.matrix.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(liou.matrix, k); it; ++it) {
            if (it.row() != 0) trip.emplace_back(it.row(), it.col(), it.value());
        }
    }
    for (std::size_t k = 0; k < d; ++k) trip.emplace_back(0, static_cast<Eigen::Index>(k * d + k), 1.0);
    SparseMatrix a(n, n);
    a.setFromTriplets(trip.begin(), trip.end());
    a.makeCompressed();

    const LuFactor lu(a);
    if (!lu.ok()) throw DegenerateKernel("trace-replaced Liouvillian is singular: " + lu.error());
    Vector rhs = Vector::Zero(n);
    rhs(0) = 1.0;
    const Vector x = lu.solve(rhs);
    if (!x.allFinite()) throw NonConvergent("sparse LU solve failed");

    if (opts.check_kernel) {
        // σ_min(A) ≤ σ₂(L) for a rank-one row replacement A of L, so
        // σ_min(A) > ratio·σ₁(L) is sufficient for a one-dimensional kernel.
        const double sigma1 = std::max((liou.matrix * x).norm() / x.norm(), DBL_EPSILON * liou.max_abs());
        Vector v = Vector::Ones(n).normalized();
        double inv_sq = 0.0;
        for (int it = 0; it < opts.kernel_iterations; ++it) {
            const Vector w = lu.solve(lu.solve_adjoint(v, false), false);
            inv_sq = w.norm();
            if (!(inv_sq > 0.0) || !std::isfinite(inv_sq)) break;
            v = w / inv_sq;
        }
        const double sigma_min_a = std::isfinite(inv_sq) && inv_sq > 0.0 ? 1.0 / std::sqrt(inv_sq) : 0.0;
        if (!(sigma_min_a > opts.kernel_ratio * sigma1)) {
            throw DegenerateKernel("Liouvillian kernel is not one-dimensional (sigma_min(A) = " +
                                   std::to_string(sigma_min_a) + ", sigma_1(L) = " + std::to_string(sigma1) + ")");
        }
    }
    return finish(liou, unvectorize(x, d), SolveMethod::trace_replacement, opts);
}

SteadyState steady_state_null_space(const Liouvillian& liou, const SolverOptions& opts) {
    const std::size_t d = liou.dim();
    if (d > 20) throw DimensionTooLarge("null-space cross-check is limited to d <= 20");
    const Matrix l = Matrix(liou.matrix);
    Eigen::BDCSVD<Matrix> svd(l, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const Eigen::Index last = s.size() - 1;
    if (opts.check_kernel && !(s(last - 1) > opts.kernel_ratio * s(last))) {
        throw DegenerateKernel("second-smallest singular value " + std::to_string(s(last - 1)) +
                               " is not well separated from " + std::to_string(s(last)));
    }
    const Vector v = svd.matrixV().col(last);
    return finish(liou, unvectorize(v, d), SolveMethod::null_space, opts);
}

double slowest_decay_rate(const LindbladModel& model) {
    LindbladModel undriven = model;
    undriven.hamiltonian = model.hamiltonian - model.drive;
    const Matrix h = no_jump_hamiltonian(undriven).data();
    Eigen::ComplexEigenSolver<Matrix> es(h, false);
    double rate = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double im = std::abs(es.eigenvalues()(k).imag());
        if (im > 1e-12) rate = std::min(rate, im);
    }
    if (!std::isfinite(rate)) throw SolverError("model has no decaying eigenmode");
    return rate;
}

double spectral_radius_estimate(const Liouvillian& liou, int iterations) {
    const Eigen::Index n = liou.matrix.rows();
    Vector x(n);
    for (Eigen::Index k = 0; k < n; ++k) x(k) = Complex(1.0, 0.5 * std::sin(static_cast<double>(k)));
    x.normalize();
    double est = 0.0;
    for (int it = 0; it < iterations; ++it) {
        Vector y = liou.matrix * x;
        const double r = y.norm();
        if (r == 0.0) break;
        // Late iterates only; the early ones mostly reflect the start vector.
        if (it >= iterations / 2) est = std::max(est, r);
        x = y / r;
    }
    double diag = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) diag = std::max(diag, std::abs(liou.matrix.coeff(k, k)));
    return std::max(est, diag);
}

DensityMatrix evolve(const LindbladModel& model, const DensityMatrix& rho0, double t_final, double dt) {
    if (rho0.dims() != model.dims) throw DimensionError("evolve: initial state lives on a different space");
    if (!(dt > 0.0) || !(t_final >= 0.0)) throw std::invalid_argument("evolve: need dt > 0 and t_final >= 0");
    const Liouvillian liou = build_liouvillian(model);
    const double radius = spectral_radius_estimate(liou);
    if (dt * radius >= 1.0) {
        throw StepSizeTooLarge("dt * spectral radius = " + std::to_string(dt * radius) + " >= 1");
    }
    const auto steps = static_cast<long>(std::ceil(t_final / dt));
    const double h = steps > 0 ? t_final / static_cast<double>(steps) : 0.0;
    const auto& l = liou.matrix;

    Vector v = vectorize(rho0.data());
    const double v0 = v.norm();
    for (long s = 0; s < steps; ++s) {
        const Vector k1 = l * v;
        const Vector k2 = l * (v + 0.5 * h * k1);
        const Vector k3 = l * (v + 0.5 * h * k2);
        const Vector k4 = l * (v + h * k3);
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if ((s & 255) == 0 && (!v.allFinite() || v.norm() > 1e3 * std::max(v0, 1.0))) {
            throw StepSizeTooLarge("RK4 integration blew up at step " + std::to_string(s));
        }
    }
    if (!v.allFinite()) throw StepSizeTooLarge("RK4 integration produced non-finite values");
    return {unvectorize(v, model.dim()), model.dims};
}

SteadyState steady_state_long_time(const LindbladModel& model, const DensityMatrix& rho0) {
    const Liouvillian liou = build_liouvillian(model);
    const double t_final = 20.0 / slowest_decay_rate(model);
    const double dt = 0.5 / spectral_radius_estimate(liou);
    DensityMatrix rho = evolve(model, rho0, t_final, dt);

    SteadyState ss;
    Matrix m = 0.5 * (rho.data() + rho.data().adjoint());
    ss.residual = (liou.matrix * vectorize(m)).norm();
    ss.rho = DensityMatrix(std::move(m), model.dims);
    ss.method = SolveMethod::long_time;
    return ss;
}

}  // namespace nrmb
