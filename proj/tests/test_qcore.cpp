#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

#include <horizon/io.hpp>
#include <horizon/qcore.hpp>

#include <algorithm>
#include <numeric>
#include <random>

using namespace horizon;

namespace {

QubitSet random_subset(std::mt19937_64 &rng, int n, int size) {
    QubitSet all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(static_cast<std::size_t>(size));
    return all;
}

const Unitary pauli_x = Unitary::from_matrix((ComplexMatrix(2, 2) << 0, 1, 1, 0).finished());

} // namespace

TEST_CASE("haar_state") {
    SUBCASE("normalized") { CHECK(haar_state(1, Seed{42}).amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-12)); }

    SUBCASE("deterministic per seed") {
        CHECK(haar_state(10, Seed{7}).amplitudes() == haar_state(10, Seed{7}).amplitudes());
        CHECK(haar_state(10, Seed{7}).amplitudes() != haar_state(10, Seed{8}).amplitudes());
    }

    SUBCASE("qubit count out of range") {
        CHECK_THROWS_AS(haar_state(0, Seed{1}), std::invalid_argument);
        CHECK_THROWS_AS(haar_state(25, Seed{1}), std::invalid_argument);
    }

    SUBCASE("mean block entropy matches brute-force oracle") {
        const QubitSet block{0, 1, 2};
        double lib = 0.0, ref = 0.0;
        for (std::uint64_t s = 0; s < 50; ++s) {
            const PureState psi = haar_state(12, Seed{s});
            lib += entropy_of_subsystem(psi, block);
            ref += oracle::entropy(psi, block);
        }
        CHECK(std::abs(lib / 50 - ref / 50) < 0.05);
        // Both sit near Page's value for an 8 x 512 split.
        CHECK(ref / 50 == doctest::Approx(oracle::page_mean_entropy_bits(8, 512)).epsilon(0.01));
    }
}

TEST_CASE("haar_unitary") {
    SUBCASE("d = 1 is a phase") {
        const Unitary u = haar_unitary(1, Seed{5});
        CHECK(std::abs(u.matrix()(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("unitarity") { CHECK(unitarity_error(haar_unitary(8, Seed{3}).matrix()) <= 1e-10); }

    SUBCASE("second moment E|tr U|^2 = 1") {
        double acc = 0.0;
        const int samples = 10000;
        for (int s = 0; s < samples; ++s) acc += std::norm(haar_unitary(4, Seed{static_cast<std::uint64_t>(s)}).matrix().trace());
        CHECK(std::abs(acc / samples - 1.0) < 0.05);
    }

    SUBCASE("range checks") {
        CHECK_THROWS_AS(haar_unitary(0, Seed{1}), std::invalid_argument);
        CHECK_THROWS_AS(haar_unitary(kMaxUnitaryDim + 1, Seed{1}), std::invalid_argument);
    }

    SUBCASE("isometry equals leading unitary columns") {
        const ComplexMatrix iso = haar_isometry(64, 4, Seed{11});
        const Unitary u = haar_unitary(64, Seed{11});
        CHECK((iso - u.matrix().leftCols(4)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("apply_unitary") {
    SUBCASE("identity leaves the state unchanged") {
        const PureState psi = haar_state(5, Seed{2});
        const PureState out = apply_unitary(psi, Unitary::identity(4), QubitSet{3, 1});
        CHECK((out.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("bit flip on qubit 0 sets bit 0 of the index") {
        const PureState out = apply_unitary(PureState::basis(2, 0), pauli_x, QubitSet{0});
        CHECK(std::abs(out[1]) == doctest::Approx(1.0));
        const PureState out1 = apply_unitary(PureState::basis(2, 0), pauli_x, QubitSet{1});
        CHECK(std::abs(out1[2]) == doctest::Approx(1.0));
    }

    SUBCASE("untouched qubits keep their reduced state") {
        const PureState psi = haar_state(10, Seed{21});
        const QubitSet targets{7, 2, 4};
        const PureState out = apply_unitary(psi, haar_unitary(8, Seed{22}), targets);
        const QubitSet rest = complement(targets, 10);
        const ComplexMatrix before = oracle::partial_trace(psi, rest);
        const ComplexMatrix after = oracle::partial_trace(out, rest);
        CHECK((before - after).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(std::abs(out.amplitudes().norm() - 1.0) < 1e-10);
    }

    SUBCASE("target ordering matches operator bit order") {
        // CNOT with control = local bit 0, target = local bit 1.
        ComplexMatrix cnot = ComplexMatrix::Zero(4, 4);
        cnot(0, 0) = cnot(2, 2) = cnot(3, 1) = cnot(1, 3) = 1.0;
        const Unitary u = Unitary::from_matrix(cnot);
        // control qubit 2 set, target qubit 0 clear: |100> -> |101>
        const PureState out = apply_unitary(PureState::basis(3, 0b100), u, QubitSet{2, 0});
        CHECK(std::abs(out[0b101]) == doctest::Approx(1.0));
    }

    SUBCASE("errors") {
        const PureState psi = haar_state(3, Seed{1});
        CHECK_THROWS_AS(apply_unitary(psi, pauli_x, QubitSet{0, 1}), std::invalid_argument);
        CHECK_THROWS_AS(apply_unitary(psi, Unitary::identity(4), QubitSet{1, 1}), std::invalid_argument);
        CHECK_THROWS_AS(apply_unitary(psi, pauli_x, QubitSet{3}), std::invalid_argument);
    }
}

TEST_CASE("reduced_density") {
    SUBCASE("Bell pair half is maximally mixed") {
        const DensityOperator rho = reduced_density(bell_state(), QubitSet{0});
        CHECK((rho.matrix() - 0.5 * ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
    }

    SUBCASE("product |0>|+> keeps the |+> projector") {
        const PureState plus = PureState::from_amplitudes(ComplexVector::Constant(2, 1.0 / std::sqrt(2.0)));
        const PureState zero = PureState::basis(1);
        const std::vector<Placement> parts{{&zero, {0}}, {&plus, {1}}};
        const DensityOperator rho = reduced_density(product_state(2, parts), QubitSet{1});
        CHECK((rho.matrix() - ComplexMatrix::Constant(2, 2, 0.5)).cwiseAbs().maxCoeff() < 1e-12);
    }

    SUBCASE("unit trace and agreement with the oracle") {
        const PureState psi = haar_state(8, Seed{4});
        const QubitSet keep{6, 1, 3, 0};
        const DensityOperator rho = reduced_density(psi, keep);
        CHECK(std::abs(rho.matrix().trace() - Complex{1.0}) < 1e-10);
        CHECK((rho.matrix() - oracle::partial_trace(psi, keep)).cwiseAbs().maxCoeff() < 1e-12);
    }

    SUBCASE("subset too large") {
        const PureState psi = PureState::basis(14);
        QubitSet keep(14);
        std::iota(keep.begin(), keep.end(), 0);
        CHECK_THROWS_AS(reduced_density(psi, keep), std::invalid_argument);
        CHECK(entropy_of_subsystem(psi, keep) == 0.0);
    }
}

TEST_CASE("entropy_bits") {
    CHECK(entropy_bits(0.5 * ComplexMatrix::Identity(2, 2)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(entropy_bits(reduced_density(PureState::basis(3, 5), QubitSet{0, 2})) == doctest::Approx(0.0));

    // Direct scalar evaluation: -(0.25 log2 0.25 + 0.75 log2 0.75).
    const double expected = -(0.25 * std::log2(0.25) + 0.75 * std::log2(0.75));
    ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
    diag(0, 0) = 0.25;
    diag(1, 1) = 0.75;
    CHECK(entropy_bits(diag) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(entropy_bits(diag) == doctest::Approx(0.811278).epsilon(1e-6));

    ComplexMatrix skew = diag;
    skew(0, 1) = 0.1;
    CHECK_THROWS_AS(entropy_bits(skew), std::invalid_argument);
    CHECK_THROWS_AS(DensityOperator::from_matrix(skew), std::invalid_argument);

    ComplexMatrix negative = ComplexMatrix::Zero(2, 2);
    negative(0, 0) = 1.1;
    negative(1, 1) = -0.1;
    CHECK_THROWS_AS(entropy_bits(negative), std::domain_error);

    ComplexMatrix tiny = ComplexMatrix::Zero(2, 2);
    tiny(0, 0) = 1.0 + 1e-11;
    tiny(1, 1) = -1e-11;
    CHECK(entropy_bits(tiny) == doctest::Approx(0.0));
}

TEST_CASE("entropy_of_subsystem and mutual_information") {
    const PureState ghz = ghz_state(3);
    CHECK(entropy_of_subsystem(ghz, QubitSet{0, 1, 2}) == 0.0);
    CHECK(entropy_of_subsystem(ghz, QubitSet{0}) == doctest::Approx(oracle::entropy(ghz, {0})).epsilon(1e-12));
    CHECK(entropy_of_subsystem(ghz, QubitSet{0}) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(mutual_information(bell_state(), QubitSet{0}, QubitSet{1}) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(mutual_information(PureState::basis(2, 3), QubitSet{0}, QubitSet{1}) == doctest::Approx(0.0));
    CHECK(mutual_information(ghz, QubitSet{0}, QubitSet{1}) ==
          doctest::Approx(oracle::mutual_information(ghz, {0}, {1})).epsilon(1e-12));
    CHECK(mutual_information(ghz, QubitSet{0}, QubitSet{1}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(mutual_information(ghz, QubitSet{0, 1}, QubitSet{1}), std::invalid_argument);
}

TEST_CASE("entangled_pairs_state") {
    SUBCASE("one pair is a Bell pair") {
        const PureState s = entangled_pairs_state(1, 1);
        CHECK((s.amplitudes() - bell_state().amplitudes()).norm() < 1e-15);
        CHECK(entropy_of_subsystem(s, QubitSet{1}) == doctest::Approx(1.0));
    }

    SUBCASE("no pairs: pure system") {
        const PureState s = entangled_pairs_state(2, 0);
        CHECK(s.num_qubits() == 2);
        CHECK(entropy_of_subsystem(s, QubitSet{}) == 0.0);
        CHECK(entropy_of_subsystem(s, QubitSet{0}) == doctest::Approx(0.0));
    }

    SUBCASE("scrambling the system leaves the reference alone") {
        const Unitary u = haar_unitary(256, Seed{9});
        const PureState s = entangled_pairs_state(8, 3, &u);
        const QubitSet ref{8, 9, 10};
        CHECK(entropy_of_subsystem(s, ref) == doctest::Approx(3.0).epsilon(1e-10));
        CHECK(oracle::entropy(s, ref) == doctest::Approx(3.0).epsilon(1e-10));
        CHECK((oracle::partial_trace(s, ref) - ComplexMatrix::Identity(8, 8) / 8.0).cwiseAbs().maxCoeff() < 1e-10);
    }

    SUBCASE("register too small") {
        CHECK_THROWS_AS(entangled_pairs_state(2, 3), std::invalid_argument);
        CHECK_THROWS_AS(entangled_pairs_state(0, 0), std::invalid_argument);
    }
}

TEST_CASE("partition") {
    Partition p(6);
    p.add("B", {0, 1}).add("R", {4});
    CHECK(p["extra"] == QubitSet{2, 3, 5});
    CHECK(p.join({"B", "R"}) == QubitSet{0, 1, 4});
    CHECK_THROWS_AS(p.add("N", {1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(p.add("N", {6}), std::invalid_argument);
    CHECK_THROWS_AS((void)p["C"], std::out_of_range);
}

TEST_CASE("state JSON round trip") {
    const PureState psi = haar_state(4, Seed{3});
    const PureState back = state_from_json(Json::parse(state_to_json(psi).dump()));
    CHECK(back.amplitudes() == psi.amplitudes());
    CHECK(state_to_json(bell_state())[3][0].get<double>() == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("properties over random instances") {
    std::mt19937_64 rng(2024);

    SUBCASE("norm preservation") {
        for (std::uint64_t t = 0; t < 50; ++t) {
            const PureState psi = haar_state(9, Seed{t});
            const int k = 1 + static_cast<int>(t % 4);
            const PureState out = apply_unitary(psi, haar_unitary(Eigen::Index{1} << k, Seed{t + 100}),
                                                random_subset(rng, 9, k));
            CHECK(std::abs(out.amplitudes().norm() - 1.0) <= 1e-10);
        }
    }

    SUBCASE("purity symmetry") {
        for (std::uint64_t t = 0; t < 100; ++t) {
            const PureState psi = haar_state(8, Seed{t});
            const QubitSet x = random_subset(rng, 8, 1 + static_cast<int>(t % 7));
            CHECK(std::abs(entropy_of_subsystem(psi, x) - entropy_of_subsystem(psi, complement(x, 8))) <= 1e-9);
        }
    }

    SUBCASE("mutual information is nonnegative before clamping") {
        double worst = 0.0;
        for (std::uint64_t t = 0; t < 1000; ++t) {
            const PureState psi = haar_state(6, Seed{t});
            const QubitSet xy = random_subset(rng, 6, 2 + static_cast<int>(t % 5));
            const auto split = 1 + static_cast<std::ptrdiff_t>(t % (xy.size() - 1));
            const QubitSet x(xy.begin(), xy.begin() + split), y(xy.begin() + split, xy.end());
            worst = std::min(worst, mutual_information_raw(psi, x, y));
        }
        CHECK(worst >= -1e-9);
    }

    SUBCASE("entropy is basis independent") {
        for (std::uint64_t t = 0; t < 20; ++t) {
            const DensityOperator rho = reduced_density(haar_state(7, Seed{t}), QubitSet{0, 1, 2});
            const ComplexMatrix u = haar_unitary(8, Seed{t + 1000}).matrix();
            const ComplexMatrix rotated = u * rho.matrix() * u.adjoint();
            CHECK(std::abs(entropy_bits(rho) - entropy_bits(0.5 * (rotated + rotated.adjoint()))) <= 1e-9);
        }
    }
}
