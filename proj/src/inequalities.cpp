#include <horizon/inequalities.hpp>
#include <horizon/parallel.hpp>

#include <algorithm>
#include <cmath>

namespace horizon {

InequalityResult ssa_slack(const PureState &state, std::span<const int> x, std::span<const int> y,
                           std::span<const int> z) {
    const QubitSet xy = disjoint_union({x, y});
    const QubitSet xz = disjoint_union({x, z});
    const QubitSet xyz = disjoint_union({x, y, z});
    const double lhs = entropy_of_subsystem(state, xyz) + entropy_of_subsystem(state, x);
    const double rhs = entropy_of_subsystem(state, xy) + entropy_of_subsystem(state, xz);
    return InequalityResult::make("ssa", lhs, rhs);
}

InequalityResult mi_monotonicity_slack(const PureState &state, std::span<const int> x, std::span<const int> y,
                                       std::span<const int> z) {
    disjoint_union({x, y, z});
    const QubitSet xy = disjoint_union({x, y});
    const double lhs = mutual_information_raw(state, x, z);
    const double rhs = mutual_information_raw(state, xy, z);
    return InequalityResult::make("mi-monotonicity", lhs, rhs);
}

InequalityResult entropy_monotonicity_slack(const PureState &state, std::span<const int> x,
                                            std::span<const int> y) {
    const QubitSet xy = disjoint_union({x, y});
    return InequalityResult::make("entropy-monotonicity", entropy_of_subsystem(state, x),
                                  entropy_of_subsystem(state, xy));
}

EntropyMonotonicityCounterexample entropy_monotonicity_counterexample() {
    PureState bell = bell_state();
    QubitSet x{0}, y{1};
    const double s_x = entropy_of_subsystem(bell, x);
    const double s_xy = entropy_of_subsystem(bell, QubitSet{0, 1});
    return {std::move(bell), x, y, s_x, s_xy, s_x - s_xy};
}

bool is_known_inequality(const std::string &name) {
    return name == "ssa" || name == "mi-monotonicity" || name == "entropy-monotonicity";
}

ScanInstance scan_instance(const StateGenerator &gen, const std::string &name, Seed trial_seed) {
    if (!is_known_inequality(name)) throw std::invalid_argument("unknown inequality: " + name);
    if (gen.num_qubits < 3 || gen.num_qubits > kMaxQubits)
        throw std::invalid_argument("scan register must hold at least 3 qubits");

    auto rng = trial_seed.child(0).engine();
    std::uniform_int_distribution<int> label(0, 3);
    ScanInstance inst{trial_seed, {}, {}, {}, {}, 0.0};
    do {
        inst.x.clear();
        inst.y.clear();
        inst.z.clear();
        for (int q = 0; q < gen.num_qubits; ++q) {
            switch (label(rng)) {
            case 0: inst.x.push_back(q); break;
            case 1: inst.y.push_back(q); break;
            case 2: inst.z.push_back(q); break;
            default: break;
            }
        }
    } while (inst.x.empty() || inst.y.empty() || inst.z.empty());

    const PureState state = haar_state(gen.num_qubits, trial_seed.child(1));
    if (name == "ssa") {
        inst.result = ssa_slack(state, inst.x, inst.y, inst.z);
        inst.paired_slack = mi_monotonicity_slack(state, inst.x, inst.y, inst.z).slack;
    } else if (name == "mi-monotonicity") {
        inst.result = mi_monotonicity_slack(state, inst.x, inst.y, inst.z);
        inst.paired_slack = ssa_slack(state, inst.x, inst.y, inst.z).slack;
    } else {
        inst.result = entropy_monotonicity_slack(state, inst.x, inst.y);
        inst.paired_slack = inst.result.slack;
    }
    return inst;
}

ScanSummary scan_random(const StateGenerator &gen, const std::string &name, int trials, Seed seed) {
    if (!is_known_inequality(name)) throw std::invalid_argument("unknown inequality: " + name);
    if (trials < 1) throw std::invalid_argument("scan needs at least one trial");

    std::vector<ScanInstance> runs(static_cast<std::size_t>(trials));
    parallel_for(runs.size(), [&](std::size_t t) { runs[t] = scan_instance(gen, name, seed.child(t)); });

    ScanSummary summary{name, trials, runs[0].result.slack, runs[0].seed, 0, 0.0};
    for (std::size_t t = 0; t < runs.size(); ++t) {
        const auto &r = runs[t];
        if (r.result.slack < summary.min_slack) {
            summary.min_slack = r.result.slack;
            summary.argmin_seed = r.seed;
            summary.argmin_trial = static_cast<int>(t);
        }
        summary.max_form_gap = std::max(summary.max_form_gap, std::abs(r.result.slack - r.paired_slack));
    }
    return summary;
}

} // namespace horizon
