#pragma once

#include <horizon/qcore.hpp>

#include <string>

namespace horizon {

/// Signed comparison lhs <= rhs. Slack is never clamped: a negative slack beyond
/// tolerance is reported as data.
struct InequalityResult {
    std::string name;
    double      lhs   = 0.0;
    double      rhs   = 0.0;
    double      slack = 0.0; // rhs - lhs
    bool        holds = true;

    static InequalityResult make(std::string name, double lhs, double rhs, double tol = kEntropyTol) {
        const double slack = rhs - lhs;
        return {std::move(name), lhs, rhs, slack, slack >= -tol};
    }
};

/// Strong subadditivity: S(X,Y,Z) + S(X) <= S(X,Y) + S(X,Z).
InequalityResult ssa_slack(const PureState &state, std::span<const int> x, std::span<const int> y,
                           std::span<const int> z);

/// Mutual-information monotonicity: S(X:Z) <= S(X,Y:Z). Equal to ssa_slack with the
/// same labels once S(Z) is added to both sides of SSA.
InequalityResult mi_monotonicity_slack(const PureState &state, std::span<const int> x, std::span<const int> y,
                                       std::span<const int> z);

/// S(X) <= S(X,Y) as an inequality; it fails on entangled states.
InequalityResult entropy_monotonicity_slack(const PureState &state, std::span<const int> x,
                                            std::span<const int> y);

struct EntropyMonotonicityCounterexample {
    PureState state;
    QubitSet  x;
    QubitSet  y;
    double    s_x;
    double    s_xy;
    double    violation; // s_x - s_xy
};

/// Bell pair with X and Y its two halves: S(X) = 1 bit while S(X,Y) = 0.
EntropyMonotonicityCounterexample entropy_monotonicity_counterexample();

/// Random scan configuration: Haar states on a fixed register whose qubits are
/// assigned uniformly to X, Y, Z or left out, redrawn until X, Y and Z are nonempty.
struct StateGenerator {
    int num_qubits = 6;
};

struct ScanInstance {
    Seed             seed;
    QubitSet         x, y, z;
    InequalityResult result;
    double           paired_slack = 0.0; // the other algebraic form, for ssa / mi-monotonicity
};

struct ScanSummary {
    std::string name;
    int         trials        = 0;
    double      min_slack     = 0.0;
    Seed        argmin_seed;
    int         argmin_trial  = 0;
    /// max |ssa - mi-monotonicity| over trials; zero for other inequalities.
    double      max_form_gap  = 0.0;
};

/// Names accepted by the scanner: "ssa", "mi-monotonicity", "entropy-monotonicity".
bool is_known_inequality(const std::string &name);

/// Evaluates one trial from its derived seed; reproduces any summary's argmin.
ScanInstance scan_instance(const StateGenerator &gen, const std::string &name, Seed trial_seed);

/// Trial t uses seed.child(t); the reduction is in trial order.
ScanSummary scan_random(const StateGenerator &gen, const std::string &name, int trials, Seed seed);

} // namespace horizon
