#pragma once

#include <horizon/io.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace horizon::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsageError = 2 };

struct ExperimentConfig {
    std::string experiment;
    std::uint64_t seed = 1;
    int samples = 20;
    int trials = 100;
    std::string out;            // empty: stdout
    std::string format = "json";

    // page-curve / paradox
    double s_bh = 12;
    int s_matter = 0;

    // epoch geometry
    int b = 3, c = 1, nprime = 2, rprime = 2, r = 4;
    int i = 1;                  // infallen qubits for the matter bound; 0 disables it
    std::string initial = "haar";
    int pairs = 0;
    bool noncausal = false;
    int probes = 32;

    // inequality-scan
    std::string inequality = "ssa";
    int qubits = 6;

    // paradox
    double eta = 0.0;
    std::optional<double> mu;
    double epsilon = 0.0;       // analytic mode only
    bool analytic_only = false;
};

struct CommandOutput {
    int exit_code = kOk;
    std::string primary;        // written to config.out, or stdout
    std::string secondary;      // optional companion file (page-curve CSV summary)
    std::string secondary_suffix;
    std::string message;        // one-line human summary for stderr
};

/// Throws std::invalid_argument on an invalid config.
CommandOutput cmd_page_curve(const ExperimentConfig &cfg);
CommandOutput cmd_inequality_scan(const ExperimentConfig &cfg);
CommandOutput cmd_causal_epoch(const ExperimentConfig &cfg);
CommandOutput cmd_paradox(const ExperimentConfig &cfg);

/// Page-curve summary: largest |S(R_k) - prediction| for |2k - (s_bh + s_matter)| >= 4,
/// and largest |MI - prediction| over the closed and open plateau.
Json page_curve_summary(const EvaporationTrace &trace);

} // namespace horizon::cli
