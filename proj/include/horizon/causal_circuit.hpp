#pragma once

// Epoch circuits: an exterior unitary W on the neighborhood N followed by an
// interior unitary V on B together with the reverse channel C.
//
// Register layout (ascending qubit indices):
//   B [0, b) | N [b, b+n) | R [b+n, b+n+r) | extra
// W's outputs reuse N's qubits: the first c are C, the next nprime are N', the
// last rprime are R'. V acts on B u C, which is the contiguous block [0, b+c), and
// its output is B'.

#include <horizon/inequalities.hpp>
#include <horizon/qcore.hpp>

#include <optional>
#include <string>

namespace horizon {

inline constexpr int         kMaxEpochQubits = 22;
inline constexpr const char *kWiringConvention =
    "little-endian; B=[0,b) N=[b,b+n) R=[b+n,b+n+r) extra after; "
    "W on N outputs C=first c, N'=next nprime, R'=last rprime; V on B+C=[0,b+c) outputs B'";

struct EpochSpec {
    int b = 0, c = 0, nprime = 0, rprime = 0, r = 0;
    int extra = 0; // inert spectator qubits after R

    [[nodiscard]] int n() const { return c + nprime + rprime; }
    [[nodiscard]] int num_qubits() const { return b + n() + r + extra; }
    void validate() const;

    [[nodiscard]] QubitSet B() const;
    [[nodiscard]] QubitSet N() const;
    [[nodiscard]] QubitSet R() const;
    [[nodiscard]] QubitSet C() const;
    [[nodiscard]] QubitSet Nprime() const;
    [[nodiscard]] QubitSet Rprime() const;
    [[nodiscard]] QubitSet interior_block() const; // B u C, V's targets

    [[nodiscard]] Partition initial_partition() const;      // B, N, R
    [[nodiscard]] Partition intermediate_partition() const; // B, C, N', R', R
    [[nodiscard]] Partition final_partition() const;        // B', N', R', R
};

struct CausalEpoch {
    EpochSpec spec;
    Unitary   w;
    Unitary   v;
    Seed      seed;
};

struct EpochRun {
    EpochSpec spec;
    PureState initial;
    PureState intermediate;
    PureState final_state;

    [[nodiscard]] Partition initial_partition() const { return spec.initial_partition(); }
    [[nodiscard]] Partition intermediate_partition() const { return spec.intermediate_partition(); }
    [[nodiscard]] Partition final_partition() const { return spec.final_partition(); }
};

/// Independent Haar W (seed.child(0)) and V (seed.child(1)).
CausalEpoch random_epoch(const EpochSpec &spec, Seed seed);

/// Builds an epoch from explicit unitaries; checks W and V dimensions against `spec`.
CausalEpoch make_epoch(const EpochSpec &spec, Unitary w, Unitary v);

EpochRun run_epoch(const CausalEpoch &epoch, const PureState &initial);

/// The single unitary on B u N (local qubits 0..b+n-1 in register order) equal to
/// V after W. Requires b + n <= 12.
Unitary compose_full_unitary(const CausalEpoch &epoch);

// --- no-signaling ---

/// Largest deviation of the exterior output from input independence. Interior inputs
/// are the qubits `interior` of u's register; the remaining inputs are the exterior,
/// held maximally entangled with a reference. For interior inputs a, a' the induced
/// operators T(|a><a'|) on exterior_out u reference must equal delta_{aa'} T(|0><0|);
/// the deviation is half the trace norm of the largest mismatch, so for diagonal
/// pairs it is the trace distance between the two output states.
double signaling_deviation_exact(const Unitary &u, std::span<const int> interior,
                                 std::span<const int> exterior_out);

/// Probe variant: interior computational basis plus probe_count Haar probes, maximum
/// pairwise trace distance of the purified exterior outputs.
double signaling_deviation_probe(const Unitary &u, std::span<const int> interior,
                                 std::span<const int> exterior_out, int probe_count, Seed seed);

/// Exact variant when u.dim() <= 2^10, probe variant otherwise.
double signaling_deviation(const Unitary &u, std::span<const int> interior, std::span<const int> exterior_out,
                           int probe_count = 32, Seed seed = Seed{0});

// --- bounds ---

/// S(R':R) on the final state against S(N:R) on the initial state.
InequalityResult bound_main(const EpochRun &run);

/// S(R':R) against S(C,R':R), both on the intermediate state.
InequalityResult bound_firewall_recast(const EpochRun &run);

/// S(R':R) after u against S(B,N:R) before it. u acts on B then N (partition order)
/// and needs no causal structure; rprime lists output qubits inside B u N.
InequalityResult bound_interior(const Unitary &u, const PureState &initial, const Partition &partition,
                                const QubitSet &rprime);

// --- initial states ---

enum class InitialKind {
    Product,    // independent Haar states on B, N, R and extra
    HaarGlobal, // one Haar state over the whole register
    Pairs,      // `pairs` N-R Bell pairs, B Bell-paired with the rest of R, others |0>
};

/// S(N:R) is 0 for Product and exactly 2 * pairs for Pairs.
PureState initial_state(const EpochSpec &spec, InitialKind kind, Seed seed, int pairs = 0);

// --- infallen matter ---

/// Layout: B | N | I | R | I_early | Ref | extra. W acts on N u I (contiguous) and
/// its outputs are relabeled C, N', R' as in the plain epoch, so
/// c + nprime + rprime = neighborhood + i.
struct MatterEpochSpec {
    int b = 0, c = 0, nprime = 0, rprime = 0, r = 0;
    int i = 0, i_early = 0, ref = 0;

    [[nodiscard]] int neighborhood() const { return c + nprime + rprime - i; }
    [[nodiscard]] int num_qubits() const { return b + c + nprime + rprime + r + i_early + ref; }
    void validate() const;

    /// Equivalent plain epoch: N u I plays N, I_early and Ref are inert extras.
    [[nodiscard]] EpochSpec circuit_spec() const;
    [[nodiscard]] QubitSet N() const;
    [[nodiscard]] QubitSet I() const;
    [[nodiscard]] QubitSet I_early() const;
    [[nodiscard]] QubitSet Ref() const;
};

/// B, N, R from a Haar state; I then I_early Bell-paired with the first Ref qubits;
/// leftover Ref qubits |0>.
PureState matter_initial_state(const MatterEpochSpec &spec, Seed seed);

struct MatterEpochResult {
    EpochRun         run;
    InequalityResult bound;      // S(R':R) <= S(N:R)
    double           s_cnr_r = 0.0;    // S(C,N',R':R) after W
    double           s_ni_r  = 0.0;    // S(N,I:R) before W
    double           s_n_r   = 0.0;    // S(N:R) before W
    double           independence = 0.0; // S(I : B,N,R) before W
    double           chain_deviation = 0.0;
};

/// Throws std::invalid_argument if I is correlated with (B,N,R) beyond 1e-9.
MatterEpochResult run_matter_epoch(const MatterEpochSpec &spec, const CausalEpoch &epoch, const PureState &initial);

} // namespace horizon
