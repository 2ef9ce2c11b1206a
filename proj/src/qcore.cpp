#include <horizon/qcore.hpp>

#include <algorithm>
#include <bit>
#include <random>

namespace horizon {

namespace detail {

std::vector<std::uint64_t> deposit_table(std::span<const int> qubits) {
    std::vector<std::uint64_t> table(std::size_t{1} << qubits.size());
    table[0] = 0;
    for (std::size_t b = 0; b < qubits.size(); ++b) {
        const std::size_t half = std::size_t{1} << b;
        const std::uint64_t bit = std::uint64_t{1} << qubits[b];
        for (std::size_t j = 0; j < half; ++j) table[j + half] = table[j] | bit;
    }
    return table;
}

} // namespace detail

void check_qubits(std::span<const int> qubits, int num_qubits, const char *what) {
    std::uint64_t seen = 0;
    for (int q : qubits) {
        if (q < 0 || q >= num_qubits)
            throw std::invalid_argument(std::string(what) + ": qubit index out of range");
        const std::uint64_t bit = std::uint64_t{1} << q;
        if (seen & bit) throw std::invalid_argument(std::string(what) + ": duplicate qubit index");
        seen |= bit;
    }
}

QubitSet complement(std::span<const int> qubits, int num_qubits) {
    std::vector<bool> taken(static_cast<std::size_t>(num_qubits), false);
    for (int q : qubits) taken.at(static_cast<std::size_t>(q)) = true;
    QubitSet rest;
    for (int q = 0; q < num_qubits; ++q)
        if (!taken[static_cast<std::size_t>(q)]) rest.push_back(q);
    return rest;
}

QubitSet disjoint_union(std::initializer_list<std::span<const int>> sets) {
    QubitSet out;
    for (auto s : sets) out.insert(out.end(), s.begin(), s.end());
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end())
        throw std::invalid_argument("subsystems overlap");
    return out;
}

// --- value types ---

PureState PureState::from_amplitudes(ComplexVector amplitudes) {
    const auto dim = static_cast<std::uint64_t>(amplitudes.size());
    if (dim < 2 || !std::has_single_bit(dim)) throw std::invalid_argument("amplitude count must be 2^n, n >= 1");
    const int n = std::countr_zero(dim);
    if (n > kMaxQubits) throw std::invalid_argument("register exceeds 24 qubits");
    if (std::abs(amplitudes.squaredNorm() - 1.0) > kStateTol) throw std::invalid_argument("state is not normalized");
    return PureState{n, std::move(amplitudes)};
}

PureState PureState::basis(int num_qubits, std::uint64_t index) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) throw std::invalid_argument("qubit count out of range");
    ComplexVector amps = ComplexVector::Zero(Eigen::Index{1} << num_qubits);
    amps(static_cast<Eigen::Index>(index)) = 1.0;
    return PureState{num_qubits, std::move(amps)};
}

DensityOperator DensityOperator::from_matrix(ComplexMatrix matrix) {
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0) throw std::invalid_argument("density operator must be square");
    if (hermiticity_error(matrix) > kStateTol) throw std::invalid_argument("density operator is not Hermitian");
    if (std::abs(matrix.trace() - Complex{1.0}) > kStateTol) throw std::invalid_argument("density operator trace is not 1");
    return DensityOperator{std::move(matrix)};
}

Unitary Unitary::from_matrix(ComplexMatrix matrix) {
    if (matrix.rows() != matrix.cols() || matrix.rows() == 0) throw std::invalid_argument("unitary must be square");
    if (unitarity_error(matrix) > kStateTol) throw std::invalid_argument("matrix is not unitary");
    return Unitary{std::move(matrix)};
}

Unitary Unitary::identity(Eigen::Index dim) { return Unitary{ComplexMatrix::Identity(dim, dim)}; }

int Unitary::num_qubits() const {
    const auto d = static_cast<std::uint64_t>(dim());
    if (!std::has_single_bit(d)) throw std::invalid_argument("unitary dimension is not a power of two");
    return std::countr_zero(d);
}

Partition &Partition::add(const std::string &name, QubitSet qubits) {
    if (name == "extra") throw std::invalid_argument("\"extra\" is implicit in a partition");
    check_qubits(qubits, num_qubits_, "partition");
    for (const auto &[other, set] : sets_) {
        for (int q : qubits)
            if (std::find(set.begin(), set.end(), q) != set.end())
                throw std::invalid_argument("partition sets " + name + " and " + other + " overlap");
    }
    sets_[name] = std::move(qubits);
    return *this;
}

bool Partition::contains(const std::string &name) const { return name == "extra" || sets_.count(name) > 0; }

QubitSet Partition::operator[](const std::string &name) const {
    if (name == "extra") {
        QubitSet named;
        for (const auto &[_, set] : sets_) named.insert(named.end(), set.begin(), set.end());
        return complement(named, num_qubits_);
    }
    auto it = sets_.find(name);
    if (it == sets_.end()) throw std::out_of_range("partition has no subsystem " + name);
    return it->second;
}

QubitSet Partition::join(std::initializer_list<std::string> names) const {
    QubitSet out;
    for (const auto &n : names) {
        const QubitSet s = (*this)[n];
        out.insert(out.end(), s.begin(), s.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

// --- sampling ---

namespace {

Complex complex_gaussian(std::mt19937_64 &rng, std::normal_distribution<double> &normal) {
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

} // namespace

PureState haar_state(int num_qubits, Seed seed) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) throw std::invalid_argument("haar_state: qubit count out of range");
    auto rng = seed.engine();
    std::normal_distribution<double> normal;
    ComplexVector amps(Eigen::Index{1} << num_qubits);
    for (Eigen::Index i = 0; i < amps.size(); ++i) amps(i) = complex_gaussian(rng, normal);
    amps.normalize();
    return PureState::from_amplitudes(std::move(amps));
}

ComplexMatrix haar_isometry(Eigen::Index rows, Eigen::Index cols, Seed seed) {
    if (rows < 1 || cols < 1 || cols > rows) throw std::invalid_argument("haar_isometry: need 1 <= cols <= rows");
    auto rng = seed.engine();
    std::normal_distribution<double> normal;
    ComplexMatrix g(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = complex_gaussian(rng, normal);

    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        const Complex r = qr.matrixQR()(j, j);
        q.col(j) *= r / std::abs(r);
    }
    return q;
}

Unitary haar_unitary(Eigen::Index dim, Seed seed) {
    if (dim < 1 || dim > kMaxUnitaryDim) throw std::invalid_argument("haar_unitary: dimension out of range");
    return Unitary::from_matrix(haar_isometry(dim, dim, seed));
}

// --- evolution and reduction ---

void apply_to_columns(ComplexMatrix &block, int num_qubits, const ComplexMatrix &u, std::span<const int> targets) {
    check_qubits(targets, num_qubits, "apply_unitary");
    if (u.rows() != (Eigen::Index{1} << targets.size()) || u.cols() != u.rows())
        throw std::invalid_argument("apply_unitary: operator dimension does not match target count");
    if (block.rows() != (Eigen::Index{1} << num_qubits)) throw std::invalid_argument("apply_unitary: register mismatch");

    const QubitSet rest = complement(targets, num_qubits);
    const auto target_off = detail::deposit_table(targets);
    const auto rest_off = detail::deposit_table(rest);
    const auto dt = static_cast<Eigen::Index>(target_off.size());
    const auto dr = static_cast<Eigen::Index>(rest_off.size());

    ComplexMatrix gathered(dt, dr);
    for (Eigen::Index col = 0; col < block.cols(); ++col) {
        for (Eigen::Index r = 0; r < dr; ++r)
            for (Eigen::Index t = 0; t < dt; ++t)
                gathered(t, r) = block(static_cast<Eigen::Index>(target_off[t] | rest_off[r]), col);
        gathered = u * gathered;
        for (Eigen::Index r = 0; r < dr; ++r)
            for (Eigen::Index t = 0; t < dt; ++t)
                block(static_cast<Eigen::Index>(target_off[t] | rest_off[r]), col) = gathered(t, r);
    }
}

PureState apply_unitary(const PureState &state, const Unitary &u, std::span<const int> targets) {
    ComplexMatrix block = state.amplitudes();
    apply_to_columns(block, state.num_qubits(), u.matrix(), targets);
    return PureState::from_amplitudes(block.col(0));
}

namespace {

// Rows indexed by `keep`, columns by the complement: rho_keep = M M^dagger.
ComplexMatrix schmidt_matrix(const PureState &state, std::span<const int> keep) {
    const QubitSet rest = complement(keep, state.num_qubits());
    const auto keep_off = detail::deposit_table(keep);
    const auto rest_off = detail::deposit_table(rest);
    ComplexMatrix m(static_cast<Eigen::Index>(keep_off.size()), static_cast<Eigen::Index>(rest_off.size()));
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            m(r, c) = state[static_cast<Eigen::Index>(keep_off[r] | rest_off[c])];
    return m;
}

} // namespace

DensityOperator reduced_density(const PureState &state, std::span<const int> keep) {
    check_qubits(keep, state.num_qubits(), "reduced_density");
    if (static_cast<int>(keep.size()) > kMaxReducedQubits)
        throw std::invalid_argument("reduced_density: subsystem exceeds 13 qubits");
    const ComplexMatrix m = schmidt_matrix(state, keep);
    ComplexMatrix rho = m * m.adjoint();
    return DensityOperator::from_matrix(std::move(rho));
}

double entropy_bits(const DensityOperator &rho) { return entropy_bits(rho.matrix()); }

double entropy_of_subsystem(const PureState &state, std::span<const int> subsystem) {
    check_qubits(subsystem, state.num_qubits(), "entropy_of_subsystem");
    const int n = state.num_qubits();
    const int size = static_cast<int>(subsystem.size());
    if (size == 0 || size == n) return 0.0;
    if (2 * size <= n) return entropy_bits(reduced_density(state, subsystem));
    const QubitSet rest = complement(subsystem, n);
    return entropy_bits(reduced_density(state, rest));
}

double mutual_information_raw(const PureState &state, std::span<const int> x, std::span<const int> y) {
    const QubitSet xy = disjoint_union({x, y});
    return entropy_of_subsystem(state, x) + entropy_of_subsystem(state, y) - entropy_of_subsystem(state, xy);
}

double mutual_information(const PureState &state, std::span<const int> x, std::span<const int> y) {
    const double mi = mutual_information_raw(state, x, y);
    return (mi < 0.0 && mi >= -kEntropyTol) ? 0.0 : mi;
}

// --- fixed constructions ---

PureState entangled_pairs_state(int system_qubits, int pairs, const Unitary *scramble) {
    if (system_qubits < 1 || pairs < 0 || pairs > system_qubits)
        throw std::invalid_argument("entangled_pairs_state: register too small for the requested pairs");
    const int n = system_qubits + pairs;
    if (n > kMaxQubits) throw std::invalid_argument("entangled_pairs_state: register exceeds 24 qubits");

    ComplexVector amps = ComplexVector::Zero(Eigen::Index{1} << n);
    const double amp = std::pow(2.0, -0.5 * pairs);
    for (std::uint64_t r = 0; r < (std::uint64_t{1} << pairs); ++r)
        amps(static_cast<Eigen::Index>(r | (r << system_qubits))) = amp;
    PureState state = PureState::from_amplitudes(std::move(amps));

    if (scramble) {
        QubitSet system(static_cast<std::size_t>(system_qubits));
        for (int q = 0; q < system_qubits; ++q) system[static_cast<std::size_t>(q)] = q;
        state = apply_unitary(state, *scramble, system);
    }
    return state;
}

PureState bell_state() { return entangled_pairs_state(1, 1); }

PureState ghz_state(int num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) throw std::invalid_argument("ghz_state: qubit count out of range");
    ComplexVector amps = ComplexVector::Zero(Eigen::Index{1} << num_qubits);
    amps(0) = amps(amps.size() - 1) = 1.0 / std::sqrt(2.0);
    return PureState::from_amplitudes(std::move(amps));
}

PureState product_state(int num_qubits, std::span<const Placement> parts) {
    QubitSet all;
    for (const auto &p : parts) {
        if (p.state->num_qubits() != static_cast<int>(p.qubits.size()))
            throw std::invalid_argument("product_state: placement size mismatch");
        all.insert(all.end(), p.qubits.begin(), p.qubits.end());
    }
    check_qubits(all, num_qubits, "product_state");
    if (static_cast<int>(all.size()) != num_qubits) throw std::invalid_argument("product_state: register not covered");

    ComplexVector amps = ComplexVector::Ones(Eigen::Index{1} << num_qubits);
    for (const auto &p : parts) {
        const auto off = detail::deposit_table(p.qubits);
        const QubitSet rest = complement(p.qubits, num_qubits);
        const auto rest_off = detail::deposit_table(rest);
        for (std::size_t j = 0; j < off.size(); ++j) {
            const Complex a = (*p.state)[static_cast<Eigen::Index>(j)];
            for (auto r : rest_off) amps(static_cast<Eigen::Index>(off[j] | r)) *= a;
        }
    }
    return PureState::from_amplitudes(std::move(amps));
}

} // namespace horizon
