#pragma once

// Random-subsystem evaporation model and the paradox bookkeeping built on it.
//
// The hole is s_bh qubits, uniformly entangled with s_matter reference qubits
// (matter pairs) and scrambled by a Haar unitary. Radiation R_k is the first k hole
// qubits; R'_k is the remaining s_bh - k.

#include <horizon/causal_circuit.hpp>
#include <horizon/inequalities.hpp>
#include <horizon/qcore.hpp>

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace horizon {

inline constexpr int kMaxEvaporationQubits = 22;

struct EvaporationModel {
    int  s_bh     = 0;
    int  s_matter = 0;
    int  samples  = 20;
    Seed seed;

    void validate() const;
};

struct TracePoint {
    int    k = 0;
    double mean_s_r = 0.0, std_s_r = 0.0;
    double mean_mi = 0.0, std_mi = 0.0;
};

struct EvaporationTrace {
    int                     s_bh = 0;
    int                     s_matter = 0;
    std::vector<TracePoint> points; // k = 0 .. s_bh
    Eigen::MatrixXd         s_r;    // samples x (s_bh + 1)
    Eigen::MatrixXd         mi;     // samples x (s_bh + 1)
};

/// One scrambled hole-plus-reference state: qubits [0, s_bh) are the hole and
/// [s_bh, s_bh + s_matter) the reference. Hole qubit j < s_matter starts paired with
/// reference qubit j; a Haar unitary over the hole follows. Only the first 2^s_matter
/// columns of that unitary touch the state, so they are drawn as a Haar isometry.
PureState scrambled_hole_state(int s_bh, int s_matter, Seed seed);

/// Sample t uses seed.child(t). The union R_k u R'_k is the whole hole, whose entropy
/// equals S(Ref) = s_matter by purity, so S(R':R) = S(R_k) + S(R'_k) - s_matter.
EvaporationTrace simulate_page_trace(const EvaporationModel &model);

/// min(k, s_bh + s_matter - k).
double predicted_entropy(int k, int s_bh, int s_matter);

/// max(0, min(2k, s_bh - s_matter, 2(s_bh - k))).
double predicted_mi(int k, int s_bh, int s_matter);

struct NeighborhoodSpec {
    double mu   = 1.0; // neighborhood area / horizon area
    double area = 1.0; // horizon area, Planck units
};

/// (mu^3 / s_bh)^(1/4), evaluated in log space so s_bh may be astronomically large.
double eta_estimate(const NeighborhoodSpec &nbhd, double s_bh);
double eta_estimate(double mu, double s_bh);

/// area^(3/4).
double matter_entropy_bound(double area);

/// 1 - (mean MI(k) + s_matter) / s_bh, clamped at 0.
double epsilon_from_trace(const EvaporationTrace &trace, int k);

/// Smallest epsilon over all k, i.e. at the k with the largest mean MI. Returns {epsilon, k}.
std::pair<double, int> tightest_epsilon(const EvaporationTrace &trace);

struct ParadoxReport {
    double eta = 0.0;
    double epsilon = 0.0;
    double s_bh = 0.0;
    double s_matter = 0.0;
    double margin_no_matter = 0.0; // eps + eta - 1
    double margin_matter = 0.0;    // eps + eta - (1 - s_matter / s_bh)
    bool   contradiction = false;  // eps + eta < 1 - s_matter / s_bh
};

ParadoxReport paradox_report(double eta, double epsilon, double s_bh, double s_matter);

/// S(N:other) <= eta * s_bh. An assumption about the state, so failure is data.
InequalityResult weak_correspondence_check(const PureState &state, std::span<const int> n,
                                           std::span<const int> other, double eta, double s_bh);

struct ParadoxDemoConfig {
    EpochSpec spec{3, 1, 2, 2, 4, 0};
    int       epochs = 50;
    int       s_bh = 12;
    int       s_matter = 0;
    double    eta = 0.0;        // target; initial S(N:R) is set to 2 floor(eta s_bh / 2)
    int       page_samples = 20;
};

struct ParadoxEpochRecord {
    Seed   seed;
    double s_n_r = 0.0;
    double s_rr = 0.0; // S(R':R) after the epoch
    double slack = 0.0;
};

struct ParadoxDemoResult {
    ParadoxReport                   report;           // epsilon from unconstrained evaporation
    double                          eta_target = 0.0;
    double                          initial_s_n_r = 0.0;
    double                          max_s_rr = 0.0;   // ceiling observed over the causal epochs
    double                          causal_epsilon = 1.0; // 1 - (max_s_rr + s_matter) / s_bh
    double                          page_epsilon = 0.0;
    int                             page_k = 0;
    double                          min_slack = 0.0;
    std::vector<ParadoxEpochRecord> epochs;
    EvaporationTrace                page_trace;
    std::string                     verdict;
};

/// Runs causal epochs from initial states that satisfy the weak-correspondence budget
/// (S(N:R) = 2 pairs <= eta s_bh; B is paired with the rest of R), records the largest
/// S(R':R) reached, and sets it against the epsilon unconstrained evaporation of an
/// s_bh-qubit hole achieves.
ParadoxDemoResult paradox_demo(const ParadoxDemoConfig &config, Seed seed);

std::string paradox_verdict(const ParadoxReport &report);

} // namespace horizon
