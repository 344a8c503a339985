#include "nrmb/hilbert.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <utility>

namespace nrmb {

std::size_t dims_product(const Dims& dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>{});
}

namespace {

void check_square(const Matrix& m, const Dims& dims, const char* who) {
    if (m.rows() != m.cols()) {
        throw DimensionError(std::string(who) + ": matrix must be square");
    }
    if (dims.empty()) {
        throw DimensionError(std::string(who) + ": empty dimension list");
    }
    if (dims_product(dims) != static_cast<std::size_t>(m.rows())) {
        throw DimensionError(std::string(who) + ": product of dims " + std::to_string(dims_product(dims)) +
                             " does not match matrix dimension " + std::to_string(m.rows()));
    }
}

}  // namespace

QuantumOperator::QuantumOperator(Matrix data, Dims dims) : data_(std::move(data)), dims_(std::move(dims)) {
    check_square(data_, dims_, "QuantumOperator");
}

QuantumOperator QuantumOperator::adjoint() const { return {data_.adjoint(), dims_}; }

void QuantumOperator::require_same_space(const QuantumOperator& rhs, const char* what) const {
    if (dims_ != rhs.dims_) {
        throw DimensionError(std::string("QuantumOperator::") + what + ": subsystem dims differ");
    }
}

QuantumOperator QuantumOperator::operator+(const QuantumOperator& rhs) const {
    require_same_space(rhs, "operator+");
    return {data_ + rhs.data_, dims_};
}

QuantumOperator QuantumOperator::operator-(const QuantumOperator& rhs) const {
    require_same_space(rhs, "operator-");
    return {data_ - rhs.data_, dims_};
}

QuantumOperator QuantumOperator::operator*(const QuantumOperator& rhs) const {
    require_same_space(rhs, "operator*");
    return {data_ * rhs.data_, dims_};
}

QuantumOperator QuantumOperator::operator*(Complex s) const { return {data_ * s, dims_}; }

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(Matrix data, Dims dims) : data_(std::move(data)), dims_(std::move(dims)) {
    check_square(data_, dims_, "DensityMatrix");
}

DensityMatrix DensityMatrix::pure(const Vector& psi, Dims dims) {
    const double norm = psi.norm();
    if (norm == 0.0) throw std::invalid_argument("DensityMatrix::pure: zero vector");
    const Vector v = psi / norm;
    return {v * v.adjoint(), std::move(dims)};
}

DensityMatrix DensityMatrix::basis_state(std::size_t index, Dims dims) {
    const auto d = static_cast<Eigen::Index>(dims_product(dims));
    if (static_cast<Eigen::Index>(index) >= d) {
        throw DimensionError("DensityMatrix::basis_state: index out of range");
    }
    Matrix m = Matrix::Zero(d, d);
    m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
    return {std::move(m), std::move(dims)};
}

DensityMatrix DensityMatrix::maximally_mixed(Dims dims) {
    const auto d = static_cast<Eigen::Index>(dims_product(dims));
    return {Matrix::Identity(d, d) / static_cast<double>(d), std::move(dims)};
}

double DensityMatrix::hermiticity_error() const { return max_abs(data_ - data_.adjoint()); }

double DensityMatrix::trace_error() const { return std::abs(data_.trace() - 1.0); }

double DensityMatrix::min_eigenvalue() const {
    const Matrix herm = 0.5 * (data_ + data_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void DensityMatrix::validate(const Tolerances& tol) const {
    if (const double e = hermiticity_error(); e > tol.hermitian) {
        throw std::runtime_error("DensityMatrix: not Hermitian (max |rho - rho^dag| = " + std::to_string(e) + ")");
    }
    if (const double e = trace_error(); e > tol.trace) {
        throw std::runtime_error("DensityMatrix: trace deviates from 1 by " + std::to_string(e));
    }
    if (const double e = min_eigenvalue(); e < tol.positivity) {
        throw std::runtime_error("DensityMatrix: negative eigenvalue " + std::to_string(e));
    }
}

// ---------------------------------------------------------------------------

QuantumOperator identity(std::size_t n) {
    const auto d = static_cast<Eigen::Index>(n);
    return {Matrix::Identity(d, d), Dims{n}};
}

QuantumOperator identity(const Dims& dims) {
    const auto d = static_cast<Eigen::Index>(dims_product(dims));
    return {Matrix::Identity(d, d), dims};
}

QuantumOperator annihilation(std::size_t n_levels) {
    if (n_levels < 2) {
        throw std::invalid_argument("annihilation: need at least 2 Fock levels");
    }
    const auto n = static_cast<Eigen::Index>(n_levels);
    Matrix m = Matrix::Zero(n, n);
    // a|m> = sqrt(m)|m-1>
    for (Eigen::Index k = 1; k < n; ++k) {
        m(k - 1, k) = std::sqrt(static_cast<double>(k));
    }
    return {std::move(m), Dims{n_levels}};
}

QuantumOperator creation(std::size_t n_levels) { return annihilation(n_levels).adjoint(); }

QuantumOperator number(std::size_t n_levels) {
    const auto a = annihilation(n_levels);
    return a.adjoint() * a;
}

QuantumOperator sigma_minus() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;  // |g><e|
    return {std::move(m), Dims{2}};
}

QuantumOperator sigma_plus() { return sigma_minus().adjoint(); }

QuantumOperator tensor(const QuantumOperator& a, const QuantumOperator& b) {
    Matrix k = Eigen::kroneckerProduct(a.data(), b.data());
    Dims dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    return {std::move(k), std::move(dims)};
}

QuantumOperator embed(const QuantumOperator& op, std::size_t slot, const Dims& dims) {
    if (slot >= dims.size()) {
        throw DimensionError("embed: slot " + std::to_string(slot) + " out of range");
    }
    if (op.dims().size() != 1 || op.dims().front() != dims[slot]) {
        throw DimensionError("embed: operator dimension does not match slot " + std::to_string(slot));
    }
    std::size_t left = 1;
    for (std::size_t i = 0; i < slot; ++i) left *= dims[i];
    std::size_t right = 1;
    for (std::size_t i = slot + 1; i < dims.size(); ++i) right *= dims[i];

    const Matrix il = Matrix::Identity(static_cast<Eigen::Index>(left), static_cast<Eigen::Index>(left));
    const Matrix ir = Matrix::Identity(static_cast<Eigen::Index>(right), static_cast<Eigen::Index>(right));
    Matrix m = Eigen::kroneckerProduct(Matrix(Eigen::kroneckerProduct(il, op.data())), ir);
    return {std::move(m), dims};
}

Complex expectation(const DensityMatrix& rho, const QuantumOperator& op) {
    if (rho.dims() != op.dims()) {
        throw DimensionError("expectation: density matrix and operator act on different spaces");
    }
    // Tr(rho * op) without forming the product.
    return (rho.data().transpose().cwiseProduct(op.data())).sum();
}

QuantumOperator commutator(const QuantumOperator& a, const QuantumOperator& b) { return a * b - b * a; }

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace nrmb
