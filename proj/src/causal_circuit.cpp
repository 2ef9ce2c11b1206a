#include <horizon/causal_circuit.hpp>

#include <algorithm>
#include <numeric>

namespace horizon {

namespace {

QubitSet range(int begin, int count) {
    QubitSet out(static_cast<std::size_t>(count));
    std::iota(out.begin(), out.end(), begin);
    return out;
}

QubitSet concat(std::span<const int> a, std::span<const int> b) {
    QubitSet out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

// ||P Q^dagger||_1 using thin QR factors when the product has low rank.
double trace_norm_product(const ComplexMatrix &p, const ComplexMatrix &q) {
    if (p.cols() >= p.rows()) {
        const ComplexMatrix full = p * q.adjoint();
        return Eigen::BDCSVD<ComplexMatrix>(full).singularValues().sum();
    }
    const Eigen::Index k = p.cols();
    Eigen::HouseholderQR<ComplexMatrix> qp(p), qq(q);
    const ComplexMatrix rp = qp.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    const ComplexMatrix rq = qq.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    const ComplexMatrix core = rp * rq.adjoint();
    return Eigen::JacobiSVD<ComplexMatrix>(core).singularValues().sum();
}

// Trace distance between G_a G_a^dagger and G_b G_b^dagger.
double trace_distance_factored(const ComplexMatrix &ga, const ComplexMatrix &gb) {
    ComplexMatrix p(ga.rows(), ga.cols() + gb.cols()), q(ga.rows(), ga.cols() + gb.cols());
    p << ga, gb;
    q << ga, -gb;
    return 0.5 * trace_norm_product(p, q);
}

// One factor per interior basis input a: rows (x, e) -> x + dX * e, columns y, so the
// purified exterior output for interior input a is G_a G_a^dagger.
std::vector<ComplexMatrix> channel_factors(const Unitary &u, std::span<const int> interior,
                                           std::span<const int> exterior_out) {
    const int m = u.num_qubits();
    check_qubits(interior, m, "signaling_deviation interior");
    check_qubits(exterior_out, m, "signaling_deviation exterior_out");
    const QubitSet exterior_in = complement(interior, m);
    const QubitSet hidden_out = complement(exterior_out, m);

    const auto a_off = detail::deposit_table(interior);
    const auto e_off = detail::deposit_table(exterior_in);
    const auto x_off = detail::deposit_table(exterior_out);
    const auto y_off = detail::deposit_table(hidden_out);
    const auto dx = static_cast<Eigen::Index>(x_off.size());
    const auto de = static_cast<Eigen::Index>(e_off.size());
    const auto dy = static_cast<Eigen::Index>(y_off.size());
    const double norm = 1.0 / std::sqrt(static_cast<double>(de));

    const ComplexMatrix &mat = u.matrix();
    std::vector<ComplexMatrix> factors;
    factors.reserve(a_off.size());
    for (auto a : a_off) {
        ComplexMatrix g(dx * de, dy);
        for (Eigen::Index e = 0; e < de; ++e) {
            const auto col = static_cast<Eigen::Index>(a | e_off[static_cast<std::size_t>(e)]);
            for (Eigen::Index y = 0; y < dy; ++y)
                for (Eigen::Index x = 0; x < dx; ++x)
                    g(x + dx * e, y) =
                        norm * mat(static_cast<Eigen::Index>(x_off[static_cast<std::size_t>(x)] |
                                                             y_off[static_cast<std::size_t>(y)]),
                                   col);
        }
        factors.push_back(std::move(g));
    }

    // All factors (and any combination of them) live in the column space of their
    // concatenation. Replacing each by its coordinates in an orthonormal basis of that
    // space leaves every Gram product, hence every trace norm, unchanged.
    const auto width = static_cast<Eigen::Index>(factors.size()) * dy;
    if (width >= dx * de) return factors;
    ComplexMatrix stacked(dx * de, width);
    for (std::size_t a = 0; a < factors.size(); ++a) stacked.middleCols(static_cast<Eigen::Index>(a) * dy, dy) = factors[a];
    Eigen::HouseholderQR<ComplexMatrix> qr(std::move(stacked));
    const ComplexMatrix r = qr.matrixQR().topRows(width).triangularView<Eigen::Upper>();
    for (std::size_t a = 0; a < factors.size(); ++a) factors[a] = r.middleCols(static_cast<Eigen::Index>(a) * dy, dy);
    return factors;
}

} // namespace

// --- layout ---

void EpochSpec::validate() const {
    if (b < 0 || c < 0 || nprime < 0 || rprime < 0 || r < 0 || extra < 0)
        throw std::invalid_argument("epoch spec: counts must be nonnegative");
    if (b + n() + r > kMaxEpochQubits) throw std::invalid_argument("epoch spec: b + n + r exceeds 22 qubits");
    if (num_qubits() < 1 || num_qubits() > kMaxQubits) throw std::invalid_argument("epoch spec: register size out of range");
}

QubitSet EpochSpec::B() const { return range(0, b); }
QubitSet EpochSpec::N() const { return range(b, n()); }
QubitSet EpochSpec::R() const { return range(b + n(), r); }
QubitSet EpochSpec::C() const { return range(b, c); }
QubitSet EpochSpec::Nprime() const { return range(b + c, nprime); }
QubitSet EpochSpec::Rprime() const { return range(b + c + nprime, rprime); }
QubitSet EpochSpec::interior_block() const { return range(0, b + c); }

Partition EpochSpec::initial_partition() const {
    Partition p(num_qubits());
    p.add("B", B()).add("N", N()).add("R", R());
    return p;
}

Partition EpochSpec::intermediate_partition() const {
    Partition p(num_qubits());
    p.add("B", B()).add("C", C()).add("N'", Nprime()).add("R'", Rprime()).add("R", R());
    return p;
}

Partition EpochSpec::final_partition() const {
    Partition p(num_qubits());
    p.add("B'", interior_block()).add("N'", Nprime()).add("R'", Rprime()).add("R", R());
    return p;
}

// --- epochs ---

CausalEpoch make_epoch(const EpochSpec &spec, Unitary w, Unitary v) {
    spec.validate();
    if (w.dim() != (Eigen::Index{1} << spec.n())) throw std::invalid_argument("epoch: W dimension must be 2^n");
    if (v.dim() != (Eigen::Index{1} << (spec.b + spec.c))) throw std::invalid_argument("epoch: V dimension must be 2^(b+c)");
    return CausalEpoch{spec, std::move(w), std::move(v), Seed{}};
}

CausalEpoch random_epoch(const EpochSpec &spec, Seed seed) {
    spec.validate();
    if (spec.n() > 12 || spec.b + spec.c > 12) throw std::invalid_argument("epoch: W or V exceeds 12 qubits");
    CausalEpoch epoch = make_epoch(spec, haar_unitary(Eigen::Index{1} << spec.n(), seed.child(0)),
                                   haar_unitary(Eigen::Index{1} << (spec.b + spec.c), seed.child(1)));
    epoch.seed = seed;
    return epoch;
}

EpochRun run_epoch(const CausalEpoch &epoch, const PureState &initial) {
    const EpochSpec &spec = epoch.spec;
    if (initial.num_qubits() != spec.num_qubits()) throw std::invalid_argument("run_epoch: register does not match spec");
    PureState intermediate = apply_unitary(initial, epoch.w, spec.N());
    PureState final_state = apply_unitary(intermediate, epoch.v, spec.interior_block());
    return EpochRun{spec, initial, std::move(intermediate), std::move(final_state)};
}

Unitary compose_full_unitary(const CausalEpoch &epoch) {
    const EpochSpec &spec = epoch.spec;
    const int m = spec.b + spec.n();
    if (m > 12) throw std::invalid_argument("compose_full_unitary: b + n exceeds 12 qubits");
    // U[(v_out, x), (b_in, n_in)] = sum_c V[v_out, (b_in, c)] W[(c, x), n_in], where x
    // runs over N' u R' and c over C.
    const Eigen::Index db = Eigen::Index{1} << spec.b, dc = Eigen::Index{1} << spec.c;
    const Eigen::Index dv = db * dc, dx = Eigen::Index{1} << (spec.nprime + spec.rprime);
    const Eigen::Index dn = dc * dx, dim = Eigen::Index{1} << m;
    const ComplexMatrix &v = epoch.v.matrix(), &w = epoch.w.matrix();
    ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index n_in = 0; n_in < dn; ++n_in)
        for (Eigen::Index b_in = 0; b_in < db; ++b_in) {
            auto col = u.col(b_in + db * n_in);
            for (Eigen::Index x = 0; x < dx; ++x)
                for (Eigen::Index c = 0; c < dc; ++c)
                    col.segment(dv * x, dv) += w(c + dc * x, n_in) * v.col(b_in + db * c);
        }
    return Unitary::composed(std::move(u));
}

// --- no-signaling ---

double signaling_deviation_exact(const Unitary &u, std::span<const int> interior, std::span<const int> exterior_out) {
    const auto g = channel_factors(u, interior, exterior_out);
    double worst = 0.0;
    for (std::size_t a = 0; a < g.size(); ++a) {
        for (std::size_t b = a + 1; b < g.size(); ++b) {
            worst = std::max(worst, trace_distance_factored(g[a], g[b]));
            worst = std::max(worst, 0.5 * trace_norm_product(g[a], g[b]));
        }
    }
    return worst;
}

double signaling_deviation_probe(const Unitary &u, std::span<const int> interior, std::span<const int> exterior_out,
                                 int probe_count, Seed seed) {
    if (probe_count < 0) throw std::invalid_argument("signaling_deviation: negative probe count");
    const auto g = channel_factors(u, interior, exterior_out);
    std::vector<ComplexMatrix> probes(g.begin(), g.end());
    for (int p = 0; p < probe_count && !interior.empty(); ++p) {
        const PureState psi = haar_state(static_cast<int>(interior.size()), seed.child(static_cast<std::uint64_t>(p)));
        ComplexMatrix mix = ComplexMatrix::Zero(g[0].rows(), g[0].cols());
        for (std::size_t a = 0; a < g.size(); ++a) mix += psi[static_cast<Eigen::Index>(a)] * g[a];
        probes.push_back(std::move(mix));
    }
    double worst = 0.0;
    for (std::size_t a = 0; a < probes.size(); ++a)
        for (std::size_t b = a + 1; b < probes.size(); ++b)
            worst = std::max(worst, trace_distance_factored(probes[a], probes[b]));
    return worst;
}

double signaling_deviation(const Unitary &u, std::span<const int> interior, std::span<const int> exterior_out,
                           int probe_count, Seed seed) {
    if (u.dim() <= (Eigen::Index{1} << 10)) return signaling_deviation_exact(u, interior, exterior_out);
    return signaling_deviation_probe(u, interior, exterior_out, probe_count, seed);
}

// --- bounds ---

InequalityResult bound_main(const EpochRun &run) {
    const EpochSpec &s = run.spec;
    const double lhs = mutual_information(run.final_state, s.Rprime(), s.R());
    const double rhs = mutual_information(run.initial, s.N(), s.R());
    return InequalityResult::make("main", lhs, rhs);
}

InequalityResult bound_firewall_recast(const EpochRun &run) {
    const EpochSpec &s = run.spec;
    const QubitSet cr = disjoint_union({s.C(), s.Rprime()});
    const double lhs = mutual_information(run.intermediate, s.Rprime(), s.R());
    const double rhs = mutual_information(run.intermediate, cr, s.R());
    return InequalityResult::make("firewall-recast", lhs, rhs);
}

InequalityResult bound_interior(const Unitary &u, const PureState &initial, const Partition &partition,
                                const QubitSet &rp) {
    if (partition.num_qubits() != initial.num_qubits()) throw std::invalid_argument("bound_interior: partition register mismatch");
    const QubitSet b = partition["B"], n = partition["N"], r = partition["R"];
    const QubitSet targets = concat(b, n);
    for (int q : rp)
        if (std::find(targets.begin(), targets.end(), q) == targets.end())
            throw std::invalid_argument("bound_interior: R' must lie inside B u N");
    const PureState after = apply_unitary(initial, u, targets);
    const double lhs = mutual_information(after, rp, r);
    const double rhs = mutual_information(initial, disjoint_union({b, n}), r);
    return InequalityResult::make("interior", lhs, rhs);
}

// --- initial states ---

PureState initial_state(const EpochSpec &spec, InitialKind kind, Seed seed, int pairs) {
    spec.validate();
    const int n = spec.num_qubits();
    switch (kind) {
    case InitialKind::HaarGlobal: return haar_state(n, seed);
    case InitialKind::Product: {
        std::vector<PureState> parts;
        std::vector<QubitSet> where;
        const QubitSet extra = range(spec.b + spec.n() + spec.r, spec.extra);
        for (const QubitSet &s : {spec.B(), spec.N(), spec.R(), extra}) {
            if (s.empty()) continue;
            parts.push_back(haar_state(static_cast<int>(s.size()), seed.child(parts.size())));
            where.push_back(s);
        }
        std::vector<Placement> placements;
        for (std::size_t k = 0; k < parts.size(); ++k) placements.push_back({&parts[k], where[k]});
        return product_state(n, placements);
    }
    case InitialKind::Pairs: {
        if (pairs < 0 || pairs > std::min(spec.n(), spec.r)) throw std::invalid_argument("initial_state: too many N-R pairs");
        const PureState bell = bell_state();
        const PureState zero = PureState::basis(1);
        const QubitSet nq = spec.N(), rq = spec.R(), bq = spec.B();
        std::vector<Placement> placements;
        std::vector<bool> used(static_cast<std::size_t>(n), false);
        auto pair_up = [&](int p, int q) {
            placements.push_back({&bell, {p, q}});
            used[static_cast<std::size_t>(p)] = used[static_cast<std::size_t>(q)] = true;
        };
        for (int j = 0; j < pairs; ++j) pair_up(nq[static_cast<std::size_t>(j)], rq[static_cast<std::size_t>(j)]);
        const int b_pairs = std::min(spec.b, spec.r - pairs);
        for (int j = 0; j < b_pairs; ++j) pair_up(bq[static_cast<std::size_t>(j)], rq[static_cast<std::size_t>(pairs + j)]);
        for (int q = 0; q < n; ++q)
            if (!used[static_cast<std::size_t>(q)]) placements.push_back({&zero, {q}});
        return product_state(n, placements);
    }
    }
    throw std::invalid_argument("initial_state: unknown kind");
}

// --- infallen matter ---

void MatterEpochSpec::validate() const {
    if (b < 0 || c < 0 || nprime < 0 || rprime < 0 || r < 0 || i < 0 || i_early < 0 || ref < 0)
        throw std::invalid_argument("matter epoch spec: counts must be nonnegative");
    if (neighborhood() < 0) throw std::invalid_argument("matter epoch spec: c + nprime + rprime must cover I");
    if (ref < i + i_early) throw std::invalid_argument("matter epoch spec: reference too small to purify the matter");
    if (num_qubits() > kMaxEpochQubits) throw std::invalid_argument("matter epoch spec: register exceeds 22 qubits");
    circuit_spec().validate();
}

EpochSpec MatterEpochSpec::circuit_spec() const { return EpochSpec{b, c, nprime, rprime, r, i_early + ref}; }
QubitSet MatterEpochSpec::N() const { return range(b, neighborhood()); }
QubitSet MatterEpochSpec::I() const { return range(b + neighborhood(), i); }
QubitSet MatterEpochSpec::I_early() const { return range(b + c + nprime + rprime + r, i_early); }
QubitSet MatterEpochSpec::Ref() const { return range(b + c + nprime + rprime + r + i_early, ref); }

PureState matter_initial_state(const MatterEpochSpec &spec, Seed seed) {
    spec.validate();
    const EpochSpec circ = spec.circuit_spec();
    const QubitSet bnr = disjoint_union({circ.B(), spec.N(), circ.R()});
    const PureState core = haar_state(static_cast<int>(bnr.size()), seed);
    const PureState bell = bell_state();
    const PureState zero = PureState::basis(1);

    std::vector<Placement> placements{{&core, bnr}};
    const QubitSet matter = concat(spec.I(), spec.I_early());
    const QubitSet ref = spec.Ref();
    for (std::size_t j = 0; j < matter.size(); ++j) placements.push_back({&bell, {matter[j], ref[j]}});
    for (std::size_t j = matter.size(); j < ref.size(); ++j) placements.push_back({&zero, {ref[j]}});
    return product_state(spec.num_qubits(), placements);
}

MatterEpochResult run_matter_epoch(const MatterEpochSpec &spec, const CausalEpoch &epoch, const PureState &initial) {
    spec.validate();
    const EpochSpec circ = spec.circuit_spec();
    if (epoch.spec.b != circ.b || epoch.spec.n() != circ.n() || epoch.spec.c != circ.c ||
        epoch.spec.nprime != circ.nprime || epoch.spec.r != circ.r || epoch.spec.extra != circ.extra)
        throw std::invalid_argument("run_matter_epoch: epoch does not match the matter spec");

    const QubitSet n = spec.N(), in = spec.I(), r = circ.R();
    const QubitSet bnr = disjoint_union({circ.B(), n, r});
    MatterEpochResult out{run_epoch(epoch, initial), {}, 0.0, 0.0, 0.0, 0.0, 0.0};
    out.independence = in.empty() ? 0.0 : mutual_information(initial, in, bnr);
    if (out.independence > kEntropyTol)
        throw std::invalid_argument("run_matter_epoch: infallen matter is correlated with (B, N, R)");

    out.s_n_r = mutual_information(initial, n, r);
    out.s_ni_r = mutual_information(initial, disjoint_union({n, in}), r);
    out.s_cnr_r = mutual_information(out.run.intermediate, disjoint_union({circ.C(), circ.Nprime(), circ.Rprime()}), r);
    out.chain_deviation = std::max(std::abs(out.s_cnr_r - out.s_ni_r), std::abs(out.s_ni_r - out.s_n_r));
    out.bound = InequalityResult::make("matter", mutual_information(out.run.final_state, circ.Rprime(), r), out.s_n_r);
    return out;
}

} // namespace horizon
