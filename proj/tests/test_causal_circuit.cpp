#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

#include <horizon/causal_circuit.hpp>

#include <unsupported/Eigen/KroneckerProduct>

using namespace horizon;

namespace {

const EpochSpec kSpec{3, 1, 2, 2, 4, 0};

QubitSet join(const QubitSet &a, const QubitSet &b) {
    QubitSet out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

double max_abs_diff(const PureState &a, const PureState &b) {
    return (a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff();
}

Unitary swap_gate() {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m(0, 0) = m(3, 3) = 1.0;
    m(1, 2) = m(2, 1) = 1.0;
    return Unitary::from_matrix(m);
}

} // namespace

TEST_CASE("EpochSpec layout") {
    CHECK(kSpec.n() == 5);
    CHECK(kSpec.B() == QubitSet{0, 1, 2});
    CHECK(kSpec.N() == QubitSet{3, 4, 5, 6, 7});
    CHECK(kSpec.C() == QubitSet{3});
    CHECK(kSpec.Nprime() == QubitSet{4, 5});
    CHECK(kSpec.Rprime() == QubitSet{6, 7});
    CHECK(kSpec.R() == QubitSet{8, 9, 10, 11});
    CHECK(kSpec.interior_block() == QubitSet{0, 1, 2, 3});
    CHECK(kSpec.final_partition()["B'"] == QubitSet{0, 1, 2, 3});
    CHECK_THROWS_AS((EpochSpec{-1, 0, 0, 0, 1, 0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((EpochSpec{10, 4, 4, 4, 4, 0}.validate()), std::invalid_argument);
}

TEST_CASE("random_epoch") {
    SUBCASE("n = 0 gives a scalar W") {
        const CausalEpoch e = random_epoch(EpochSpec{2, 0, 0, 0, 1, 0}, Seed{1});
        CHECK(e.w.dim() == 1);
        CHECK(std::abs(std::abs(e.w.matrix()(0, 0)) - 1.0) <= 1e-12);
    }
    SUBCASE("reproducible and unitary") {
        const CausalEpoch a = random_epoch(kSpec, Seed{8});
        const CausalEpoch b = random_epoch(kSpec, Seed{8});
        CHECK(a.w.matrix() == b.w.matrix());
        CHECK(a.v.matrix() == b.v.matrix());
        CHECK(unitarity_error(a.w.matrix()) <= 1e-10);
        CHECK(unitarity_error(a.v.matrix()) <= 1e-10);
        CHECK(a.w.dim() == 32);
        CHECK(a.v.dim() == 16);
    }
    SUBCASE("dimension checks") {
        CHECK_THROWS_AS(make_epoch(kSpec, Unitary::identity(16), Unitary::identity(16)), std::invalid_argument);
        CHECK_THROWS_AS(make_epoch(kSpec, Unitary::identity(32), Unitary::identity(8)), std::invalid_argument);
    }
}

TEST_CASE("run_epoch") {
    const PureState initial = initial_state(kSpec, InitialKind::HaarGlobal, Seed{4});

    SUBCASE("identity epoch") {
        const CausalEpoch e = make_epoch(kSpec, Unitary::identity(32), Unitary::identity(16));
        const EpochRun run = run_epoch(e, initial);
        CHECK(max_abs_diff(run.final_state, initial) == 0.0);
    }

    SUBCASE("R is untouched") {
        const EpochRun run = run_epoch(random_epoch(kSpec, Seed{5}), initial);
        const double s0 = entropy_of_subsystem(run.initial, kSpec.R());
        CHECK(std::abs(entropy_of_subsystem(run.intermediate, kSpec.R()) - s0) <= 1e-9);
        CHECK(std::abs(entropy_of_subsystem(run.final_state, kSpec.R()) - s0) <= 1e-9);
        CHECK(std::abs(run.final_state.amplitudes().norm() - 1.0) <= 1e-10);
    }

    SUBCASE("W preserves S(N:R), brute force on 10 qubits") {
        const EpochSpec spec{3, 1, 2, 2, 2, 0};
        const PureState psi = initial_state(spec, InitialKind::HaarGlobal, Seed{6});
        const EpochRun run = run_epoch(random_epoch(spec, Seed{7}), psi);
        const QubitSet cnr = join(join(spec.C(), spec.Nprime()), spec.Rprime());
        const double before = oracle::mutual_information(run.initial, spec.N(), spec.R());
        const double after = oracle::mutual_information(run.intermediate, cnr, spec.R());
        CHECK(std::abs(before - after) <= 1e-9);
        CHECK(std::abs(mutual_information(run.initial, spec.N(), spec.R()) - before) <= 1e-9);
    }

    SUBCASE("register mismatch") {
        CHECK_THROWS_AS(run_epoch(random_epoch(kSpec, Seed{1}), PureState::basis(5)), std::invalid_argument);
    }
}

TEST_CASE("compose_full_unitary") {
    SUBCASE("identities") {
        const CausalEpoch e = make_epoch(kSpec, Unitary::identity(32), Unitary::identity(16));
        const Unitary u = compose_full_unitary(e);
        CHECK((u.matrix() - ComplexMatrix::Identity(256, 256)).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("matches the two-step run") {
        for (std::uint64_t t = 0; t < 5; ++t) {
            const CausalEpoch e = random_epoch(kSpec, Seed{100 + t});
            const PureState psi = initial_state(kSpec, InitialKind::HaarGlobal, Seed{200 + t});
            const Unitary u = compose_full_unitary(e);
            CHECK(unitarity_error(u.matrix()) <= 1e-10);
            QubitSet bn = join(kSpec.B(), kSpec.N());
            const PureState direct = apply_unitary(psi, u, bn);
            CHECK(max_abs_diff(direct, run_epoch(e, psi).final_state) <= 1e-10);
        }
    }

    SUBCASE("too large") {
        CHECK_THROWS_AS(compose_full_unitary(random_epoch(EpochSpec{6, 1, 3, 3, 1, 0}, Seed{1})), std::invalid_argument);
    }
}

TEST_CASE("signaling_deviation") {
    SUBCASE("product across the cut") {
        const Unitary v = haar_unitary(4, Seed{1}), w = haar_unitary(8, Seed{2});
        const ComplexMatrix vw = Eigen::kroneckerProduct(w.matrix(), v.matrix());
        const Unitary u = Unitary::from_matrix(vw);
        const QubitSet interior{0, 1}, ext{2, 3, 4};
        CHECK(signaling_deviation_exact(u, interior, ext) <= 1e-10);
        CHECK(signaling_deviation_probe(u, interior, ext, 8, Seed{3}) <= 1e-10);
    }

    SUBCASE("swap signals") {
        const Unitary s = swap_gate();
        const QubitSet interior{0}, ext{1};
        const double d = signaling_deviation(s, interior, ext);
        CHECK(d >= 0.5);
        // |0> vs |1> on the interior: exterior output is |a><a| with a mixed reference.
        CHECK(d == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(signaling_deviation_probe(s, interior, ext, 4, Seed{1}) == doctest::Approx(1.0).epsilon(1e-10));
    }

    SUBCASE("composed causal epochs never signal toward N', R'") {
        const QubitSet ext = join(kSpec.Nprime(), kSpec.Rprime());
        double worst = 0.0;
        for (std::uint64_t t = 0; t < 20; ++t)
            worst = std::max(worst, signaling_deviation(compose_full_unitary(random_epoch(kSpec, Seed{t})), kSpec.B(), ext));
        CHECK(worst <= 1e-10);
    }

    SUBCASE("probe variant on a larger epoch") {
        const EpochSpec big{1, 1, 4, 5, 1, 0};
        const Unitary u = compose_full_unitary(random_epoch(big, Seed{9}));
        CHECK(u.dim() == 2048);
        const QubitSet ext = join(big.Nprime(), big.Rprime());
        CHECK(signaling_deviation(u, big.B(), ext, 8, Seed{1}) <= 1e-10);
    }

    SUBCASE("a Haar unitary across the cut signals") {
        const Unitary u = haar_unitary(256, Seed{3});
        const QubitSet ext = join(kSpec.Nprime(), kSpec.Rprime());
        CHECK(signaling_deviation(u, kSpec.B(), ext) > 1e-3);
    }
}

TEST_CASE("bound_main") {
    SUBCASE("product N, R") {
        const PureState psi = initial_state(kSpec, InitialKind::Product, Seed{1});
        const InequalityResult r = bound_main(run_epoch(random_epoch(kSpec, Seed{2}), psi));
        CHECK(r.rhs <= 1e-9);
        CHECK(r.lhs <= 1e-9);
        CHECK(r.holds);
    }

    SUBCASE("identity epoch with R' uncorrelated") {
        const PureState psi = initial_state(kSpec, InitialKind::Pairs, Seed{1}, 1);
        const CausalEpoch e = make_epoch(kSpec, Unitary::identity(32), Unitary::identity(16));
        const InequalityResult r = bound_main(run_epoch(e, psi));
        CHECK(r.lhs <= 1e-12);
        CHECK(r.rhs == doctest::Approx(2.0));
    }

    SUBCASE("random epochs on entangled states") {
        double worst = 1.0;
        for (std::uint64_t t = 0; t < 100; ++t) {
            const PureState psi = initial_state(kSpec, InitialKind::HaarGlobal, Seed{t}.child(10));
            worst = std::min(worst, bound_main(run_epoch(random_epoch(kSpec, Seed{t}), psi)).slack);
        }
        CHECK(worst >= -1e-9);
    }
}

TEST_CASE("bound_firewall_recast") {
    SUBCASE("c = 0 gives identical sides") {
        const EpochSpec spec{3, 0, 2, 2, 4, 0};
        const PureState psi = initial_state(spec, InitialKind::HaarGlobal, Seed{3});
        const InequalityResult r = bound_firewall_recast(run_epoch(random_epoch(spec, Seed{4}), psi));
        CHECK(std::abs(r.slack) <= 1e-9);
    }

    SUBCASE("random epochs") {
        for (std::uint64_t t = 0; t < 30; ++t) {
            const PureState psi = initial_state(kSpec, InitialKind::HaarGlobal, Seed{t}.child(10));
            CHECK(bound_firewall_recast(run_epoch(random_epoch(kSpec, Seed{t}), psi)).slack >= -1e-9);
        }
    }

    SUBCASE("(C, R') uncorrelated with R forces lhs to zero") {
        // N starts in |0>, so nothing W outputs can be correlated with R.
        const PureState psi = initial_state(kSpec, InitialKind::Pairs, Seed{1}, 0);
        const EpochRun run = run_epoch(random_epoch(kSpec, Seed{2}), psi);
        const QubitSet cr = join(kSpec.C(), kSpec.Rprime());
        CHECK(oracle::mutual_information(run.intermediate, cr, kSpec.R()) <= 1e-9);
        CHECK(bound_firewall_recast(run).lhs <= 1e-9);
    }
}

TEST_CASE("bound_interior") {
    SUBCASE("identity with R' in a product state") {
        const PureState psi = initial_state(kSpec, InitialKind::Pairs, Seed{1}, 0);
        const InequalityResult r = bound_interior(Unitary::identity(256), psi, kSpec.initial_partition(), kSpec.Rprime());
        CHECK(r.lhs <= 1e-12);
        CHECK(r.holds);
    }

    SUBCASE("scrambled B u N maximally entangled with R") {
        // B=[0,2) N=[2,5) R=[5,10); qubit j of B u N pairs with 5 + j.
        const EpochSpec spec{2, 1, 1, 1, 5, 0};
        const PureState psi = entangled_pairs_state(5, 5);
        const Unitary u = haar_unitary(32, Seed{11});
        const InequalityResult r = bound_interior(u, psi, spec.initial_partition(), spec.Rprime());
        CHECK(r.rhs == doctest::Approx(10.0).epsilon(1e-9));
        CHECK(r.slack >= -1e-9);
        const PureState after = apply_unitary(psi, u, join(spec.B(), spec.N()));
        CHECK(r.lhs == doctest::Approx(oracle::mutual_information(after, spec.Rprime(), spec.R())).epsilon(1e-9));
        CHECK(r.lhs == doctest::Approx(2.0).epsilon(1e-9));

        // Taking all of B u N as R' saturates the bound.
        const InequalityResult full = bound_interior(u, psi, spec.initial_partition(), join(spec.B(), spec.N()));
        CHECK(std::abs(full.slack) <= 1e-9);
    }

    SUBCASE("product B u N vs R") {
        const PureState psi = initial_state(kSpec, InitialKind::Product, Seed{5});
        const InequalityResult r =
            bound_interior(haar_unitary(256, Seed{6}), psi, kSpec.initial_partition(), kSpec.Rprime());
        CHECK(r.rhs <= 1e-9);
        CHECK(r.lhs <= 1e-9);
    }

    SUBCASE("non-causal Haar unitaries") {
        for (std::uint64_t t = 0; t < 20; ++t) {
            const PureState psi = initial_state(kSpec, InitialKind::HaarGlobal, Seed{t}.child(1));
            const Unitary u = haar_unitary(256, Seed{t}.child(2));
            CHECK(bound_interior(u, psi, kSpec.initial_partition(), kSpec.Rprime()).slack >= -1e-9);
        }
    }

    SUBCASE("R' outside the unitary's support") {
        const PureState psi = initial_state(kSpec, InitialKind::Product, Seed{5});
        CHECK_THROWS_AS(bound_interior(Unitary::identity(256), psi, kSpec.initial_partition(), kSpec.R()),
                        std::invalid_argument);
    }
}

TEST_CASE("initial_state") {
    SUBCASE("pairs fix S(N:R) exactly") {
        for (int pairs = 0; pairs <= 4; ++pairs) {
            const PureState psi = initial_state(kSpec, InitialKind::Pairs, Seed{1}, pairs);
            CHECK(mutual_information(psi, kSpec.N(), kSpec.R()) == doctest::Approx(2.0 * pairs).epsilon(1e-12));
        }
        CHECK_THROWS_AS(initial_state(kSpec, InitialKind::Pairs, Seed{1}, 5), std::invalid_argument);
    }
    SUBCASE("product has no correlations across B, N, R") {
        const PureState psi = initial_state(kSpec, InitialKind::Product, Seed{2});
        CHECK(mutual_information(psi, kSpec.N(), kSpec.R()) <= 1e-9);
        CHECK(mutual_information(psi, kSpec.B(), kSpec.N()) <= 1e-9);
    }
}

TEST_CASE("run_matter_epoch") {
    SUBCASE("i = 0 reduces to the plain epoch") {
        const MatterEpochSpec ms{3, 1, 2, 2, 4, 0, 0, 0};
        const EpochSpec circ = ms.circuit_spec();
        CHECK(circ.num_qubits() == kSpec.num_qubits());
        const CausalEpoch e = random_epoch(circ, Seed{3});
        const PureState psi = initial_state(circ, InitialKind::HaarGlobal, Seed{4});
        const MatterEpochResult m = run_matter_epoch(ms, e, psi);
        const InequalityResult plain = bound_main(run_epoch(e, psi));
        CHECK(m.bound.lhs == plain.lhs);
        CHECK(m.bound.rhs == plain.rhs);
        CHECK(m.independence == 0.0);
    }

    SUBCASE("equality chain with I purified by Ref") {
        const MatterEpochSpec ms{2, 1, 2, 2, 3, 1, 1, 2};
        CHECK(ms.neighborhood() == 4);
        CHECK(ms.I() == QubitSet{6});
        CHECK(ms.I_early() == QubitSet{10});
        CHECK(ms.Ref() == QubitSet{11, 12});
        for (std::uint64_t t = 0; t < 10; ++t) {
            const PureState psi = matter_initial_state(ms, Seed{t}.child(0));
            const MatterEpochResult m = run_matter_epoch(ms, random_epoch(ms.circuit_spec(), Seed{t}.child(1)), psi);
            CHECK(m.chain_deviation <= 1e-9);
            CHECK(m.bound.slack >= -1e-9);
            CHECK(m.independence <= 1e-9);
            if (t == 0) {
                const double s_ni = oracle::mutual_information(psi, join(ms.N(), ms.I()), ms.circuit_spec().R());
                const double s_n = oracle::mutual_information(psi, ms.N(), ms.circuit_spec().R());
                CHECK(std::abs(s_ni - s_n) <= 1e-9);
            }
        }
    }

    SUBCASE("correlated matter is rejected") {
        const MatterEpochSpec ms{2, 1, 2, 2, 3, 1, 0, 1};
        const PureState psi = haar_state(ms.num_qubits(), Seed{1});
        CHECK_THROWS_AS(run_matter_epoch(ms, random_epoch(ms.circuit_spec(), Seed{2}), psi), std::invalid_argument);
    }

    SUBCASE("spec checks") {
        CHECK_THROWS_AS((MatterEpochSpec{2, 0, 0, 1, 3, 2, 0, 2}.validate()), std::invalid_argument);
        CHECK_THROWS_AS((MatterEpochSpec{2, 1, 2, 2, 3, 1, 1, 1}.validate()), std::invalid_argument);
    }
}
