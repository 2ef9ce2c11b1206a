#pragma once

// Dense state-vector kernel.
//
// Bit ordering: qubit i is bit i of the amplitude index (little-endian). Every
// ordered qubit list used as an operator target follows the same rule: the j-th
// listed qubit is bit j of the operator's local index.

#include <horizon/seed.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace horizon {

using Complex       = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using QubitSet      = std::vector<int>;

inline constexpr int    kMaxQubits        = 24;
inline constexpr int    kMaxReducedQubits = 13;
inline constexpr int    kMaxUnitaryDim    = 1 << 12;
inline constexpr double kStateTol         = 1e-10;
inline constexpr double kEigenFloor       = 1e-12;
inline constexpr double kEntropyTol       = 1e-9;

namespace detail {

/// table[j] is the global index whose bits at `qubits` spell j (bit k of j -> qubits[k]).
std::vector<std::uint64_t> deposit_table(std::span<const int> qubits);

} // namespace detail

/// Ascending list of the register indices not in `qubits`.
QubitSet complement(std::span<const int> qubits, int num_qubits);

/// Ascending union of disjoint sets; throws on overlap.
QubitSet disjoint_union(std::initializer_list<std::span<const int>> sets);

/// Throws std::invalid_argument unless every index is in [0, num_qubits) and appears once.
void check_qubits(std::span<const int> qubits, int num_qubits, const char *what);

template <typename Derived>
double hermiticity_error(const Eigen::MatrixBase<Derived> &m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
double unitarity_error(const Eigen::MatrixBase<Derived> &m) {
    using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Matrix prod = m * m.adjoint();
    return (prod - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

/// -sum p log2 p over a spectrum, with entries below the 1e-12 floor contributing zero.
/// Entries below -1e-10 are not a valid density spectrum and throw std::domain_error.
template <typename Derived>
double spectrum_entropy_bits(const Eigen::DenseBase<Derived> &eigenvalues) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        const double p = eigenvalues(i);
        if (p < -kStateTol) throw std::domain_error("density spectrum has a negative eigenvalue");
        if (p < kEigenFloor) continue;
        s -= p * std::log2(p);
    }
    return s;
}

/// Von Neumann entropy in bits of any Hermitian matrix expression.
template <typename Derived>
double entropy_bits(const Eigen::MatrixBase<Derived> &rho) {
    if (rho.rows() != rho.cols()) throw std::invalid_argument("entropy of a non-square matrix");
    if (hermiticity_error(rho) > kStateTol) throw std::invalid_argument("entropy of a non-Hermitian matrix");
    using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.eval(), Eigen::EigenvaluesOnly);
    return spectrum_entropy_bits(solver.eigenvalues());
}

/// Unit-norm amplitude vector of length 2^n, 1 <= n <= 24.
class PureState {
  public:
    static PureState from_amplitudes(ComplexVector amplitudes);
    static PureState basis(int num_qubits, std::uint64_t index = 0);

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] Eigen::Index dim() const { return amplitudes_.size(); }
    [[nodiscard]] const ComplexVector &amplitudes() const { return amplitudes_; }
    [[nodiscard]] Complex operator[](Eigen::Index i) const { return amplitudes_(i); }

  private:
    PureState(int n, ComplexVector amplitudes) : num_qubits_(n), amplitudes_(std::move(amplitudes)) {}

    int           num_qubits_ = 0;
    ComplexVector amplitudes_;
};

/// Hermitian, unit-trace operator on a subsystem. Positivity is checked when the
/// spectrum is computed (entropy_bits), not on construction.
class DensityOperator {
  public:
    static DensityOperator from_matrix(ComplexMatrix matrix);

    [[nodiscard]] Eigen::Index dim() const { return matrix_.rows(); }
    [[nodiscard]] const ComplexMatrix &matrix() const { return matrix_; }

  private:
    explicit DensityOperator(ComplexMatrix m) : matrix_(std::move(m)) {}
    ComplexMatrix matrix_;
};

class Unitary {
  public:
    /// Throws unless square and U U^dagger = I within 1e-10 (max-abs entrywise).
    static Unitary from_matrix(ComplexMatrix matrix);
    static Unitary identity(Eigen::Index dim);
    /// No check; for products of operators that were already verified unitary.
    static Unitary composed(ComplexMatrix matrix) { return Unitary{std::move(matrix)}; }

    [[nodiscard]] Eigen::Index dim() const { return matrix_.rows(); }
    /// log2(dim); throws if dim is not a power of two.
    [[nodiscard]] int num_qubits() const;
    [[nodiscard]] const ComplexMatrix &matrix() const { return matrix_; }
    [[nodiscard]] Unitary adjoint() const { return Unitary{matrix_.adjoint()}; }

  private:
    explicit Unitary(ComplexMatrix m) : matrix_(std::move(m)) {}
    ComplexMatrix matrix_;
};

/// Named, pairwise disjoint qubit sets over a register. Indices not named belong to "extra".
class Partition {
  public:
    explicit Partition(int num_qubits) : num_qubits_(num_qubits) {}

    Partition &add(const std::string &name, QubitSet qubits);

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] bool contains(const std::string &name) const;
    /// Named set; "extra" resolves to every index not covered by a named set.
    [[nodiscard]] QubitSet operator[](const std::string &name) const;
    /// Ascending union of the listed sets.
    [[nodiscard]] QubitSet join(std::initializer_list<std::string> names) const;
    [[nodiscard]] const std::map<std::string, QubitSet> &sets() const { return sets_; }

  private:
    int                               num_qubits_;
    std::map<std::string, QubitSet>   sets_;
};

// --- sampling ---

PureState     haar_state(int num_qubits, Seed seed);
/// First `cols` columns of a Haar unitary on `rows` dimensions: Gaussian fill in
/// column-major order, QR, then the phase fix R_jj / |R_jj| on each column. For the
/// same seed this matches the leading columns of haar_unitary(rows, seed).
ComplexMatrix haar_isometry(Eigen::Index rows, Eigen::Index cols, Seed seed);
Unitary       haar_unitary(Eigen::Index dim, Seed seed);

// --- evolution and reduction ---

/// Applies u to the ordered target qubits; the j-th target is bit j of u's index.
PureState apply_unitary(const PureState &state, const Unitary &u, std::span<const int> targets);

/// In-place variant acting on every column of `block` (rows indexed by the register).
void apply_to_columns(ComplexMatrix &block, int num_qubits, const ComplexMatrix &u,
                      std::span<const int> targets);

/// Reduced operator on `keep`; the j-th kept qubit is bit j of the result's index.
DensityOperator reduced_density(const PureState &state, std::span<const int> keep);

double entropy_bits(const DensityOperator &rho);

/// S(X), computed on whichever of X or its complement is smaller.
double entropy_of_subsystem(const PureState &state, std::span<const int> subsystem);

/// S(X) + S(Y) - S(X u Y) before any clamping.
double mutual_information_raw(const PureState &state, std::span<const int> x, std::span<const int> y);

/// Mutual information with values in [-1e-9, 0) clamped to zero. Larger negative
/// values are returned unchanged so numerical faults stay visible.
double mutual_information(const PureState &state, std::span<const int> x, std::span<const int> y);

// --- fixed constructions ---

/// Register of `system_qubits` followed by `pairs` reference qubits. System qubit j is
/// maximally entangled with reference qubit system_qubits + j; the remaining system
/// qubits start in |0>. An optional scramble then acts on all system qubits.
PureState entangled_pairs_state(int system_qubits, int pairs, const Unitary *scramble = nullptr);

PureState bell_state();
PureState ghz_state(int num_qubits);

/// Product of states placed on disjoint qubit lists of an n-qubit register.
struct Placement {
    const PureState *state;
    QubitSet         qubits;
};
PureState product_state(int num_qubits, std::span<const Placement> parts);

} // namespace horizon
