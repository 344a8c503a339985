// hilbert.hpp — dense operator algebra on qubit ⊗ magnon [⊗ cavity] spaces.
//
// Basis conventions used everywhere in the library:
//   * subsystem order is (qubit, magnon[, cavity])
//   * the qubit basis is (|g>, |e>), so sigma_minus = |g><e| has entry (0,1)
//   * bosonic Fock states are ascending |0>, |1>, ...
//   * frequencies are stored in units of 2π·MHz (value 10 means ω/2π = 10 MHz)

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace nrmb {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Dims = std::vector<std::size_t>;

inline constexpr Complex kI{0.0, 1.0};

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::size_t dims_product(const Dims& dims);

// Complex square matrix tagged with the subsystem dimensions it acts on.
class QuantumOperator {
public:
    QuantumOperator() = default;
    QuantumOperator(Matrix data, Dims dims);

    const Matrix& data() const noexcept { return data_; }
    const Dims& dims() const noexcept { return dims_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.rows()); }

    QuantumOperator adjoint() const;

    QuantumOperator operator+(const QuantumOperator& rhs) const;
    QuantumOperator operator-(const QuantumOperator& rhs) const;
    QuantumOperator operator*(const QuantumOperator& rhs) const;
    QuantumOperator operator*(Complex s) const;
    friend QuantumOperator operator*(Complex s, const QuantumOperator& op) { return op * s; }

private:
    void require_same_space(const QuantumOperator& rhs, const char* what) const;

    Matrix data_;
    Dims dims_;
};

// Density matrix; the invariants (Hermitian, unit trace, PSD) are checked by
// validate(), not enforced on construction, so solvers can build and repair.
class DensityMatrix {
public:
    DensityMatrix() = default;
    DensityMatrix(Matrix data, Dims dims);

    static DensityMatrix pure(const Vector& psi, Dims dims);
    // |index><index| in the composite basis.
    static DensityMatrix basis_state(std::size_t index, Dims dims);
    static DensityMatrix maximally_mixed(Dims dims);

    const Matrix& data() const noexcept { return data_; }
    const Dims& dims() const noexcept { return dims_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.rows()); }

    double hermiticity_error() const;
    double trace_error() const;
    double min_eigenvalue() const;

    struct Tolerances {
        double hermitian = 1e-12;
        double trace = 1e-10;
        double positivity = -1e-9;
    };
    // Throws std::runtime_error naming the first violated invariant.
    void validate(const Tolerances& tol) const;
    void validate() const { validate(Tolerances{}); }

private:
    Matrix data_;
    Dims dims_;
};

QuantumOperator identity(std::size_t n);
QuantumOperator identity(const Dims& dims);

// Truncated bosonic annihilation operator on n_levels Fock states.
QuantumOperator annihilation(std::size_t n_levels);
QuantumOperator creation(std::size_t n_levels);
QuantumOperator number(std::size_t n_levels);

QuantumOperator sigma_minus();
QuantumOperator sigma_plus();

QuantumOperator tensor(const QuantumOperator& a, const QuantumOperator& b);

// op acting on subsystem `slot` of the composite space `dims`, identity elsewhere.
QuantumOperator embed(const QuantumOperator& op, std::size_t slot, const Dims& dims);

Complex expectation(const DensityMatrix& rho, const QuantumOperator& op);

// [a, b] = ab - ba
QuantumOperator commutator(const QuantumOperator& a, const QuantumOperator& b);

double max_abs(const Matrix& m);

}  // namespace nrmb
