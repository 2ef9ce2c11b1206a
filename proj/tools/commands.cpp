#include "commands.hpp"

#include <horizon/causal_circuit.hpp>
#include <horizon/evaporation.hpp>
#include <horizon/inequalities.hpp>
#include <horizon/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace horizon::cli {

namespace {

int checked_size(double s_bh) {
    if (!(s_bh >= 1.0) || s_bh != std::floor(s_bh) || s_bh > kMaxEvaporationQubits)
        throw std::invalid_argument("s_bh must be an integer qubit count in [1, 22] for simulation");
    return static_cast<int>(s_bh);
}

void require_json(const ExperimentConfig &cfg) {
    if (cfg.format != "json") throw std::invalid_argument(cfg.experiment + " only writes json");
}

void check_format(const ExperimentConfig &cfg) {
    if (cfg.format != "json" && cfg.format != "csv") throw std::invalid_argument("format must be csv or json");
}

std::string dump(const Json &j) { return j.dump(2) + "\n"; }

QubitSet local_range(int begin, int count) {
    QubitSet q(static_cast<std::size_t>(count));
    std::iota(q.begin(), q.end(), begin);
    return q;
}

InitialKind parse_initial(const std::string &name) {
    if (name == "haar") return InitialKind::HaarGlobal;
    if (name == "product") return InitialKind::Product;
    if (name == "pairs") return InitialKind::Pairs;
    throw std::invalid_argument("initial must be haar, product or pairs");
}

} // namespace

Json page_curve_summary(const EvaporationTrace &trace) {
    const int total = trace.s_bh + trace.s_matter;
    const int plateau_lo = (trace.s_bh - trace.s_matter + 1) / 2;
    const int plateau_hi = total / 2;
    double off = 0.0, plateau = 0.0, interior = 0.0, mi_all = 0.0, endpoint = 0.0;
    for (const auto &p : trace.points) {
        const double ds = std::abs(p.mean_s_r - predicted_entropy(p.k, trace.s_bh, trace.s_matter));
        const double dm = std::abs(p.mean_mi - predicted_mi(p.k, trace.s_bh, trace.s_matter));
        if (std::abs(2 * p.k - total) >= 4) off = std::max(off, ds);
        if (p.k >= plateau_lo && p.k <= plateau_hi) plateau = std::max(plateau, dm);
        if (2 * p.k > trace.s_bh - trace.s_matter && 2 * p.k < total) interior = std::max(interior, dm);
        mi_all = std::max(mi_all, dm);
    }
    const Eigen::Index last = trace.s_bh;
    endpoint = std::max({trace.s_r.col(0).cwiseAbs().maxCoeff(),
                         (trace.s_r.col(last).array() - trace.s_matter).abs().maxCoeff(),
                         trace.mi.col(0).cwiseAbs().maxCoeff(), trace.mi.col(last).cwiseAbs().maxCoeff()});
    return Json{{"max_abs_deviation_from_prediction_offplateau", off},
                {"plateau_deviation", plateau},
                {"plateau_interior_deviation", interior},
                {"max_abs_mi_deviation", mi_all},
                {"endpoint_deviation", endpoint}};
}

CommandOutput cmd_page_curve(const ExperimentConfig &cfg) {
    check_format(cfg);
    const EvaporationModel model{checked_size(cfg.s_bh), cfg.s_matter, cfg.samples, Seed{cfg.seed}};
    model.validate();
    const EvaporationTrace trace = simulate_page_trace(model);
    const Json summary = page_curve_summary(trace);

    CommandOutput out;
    out.exit_code = summary["endpoint_deviation"].get<double>() <= kEntropyTol ? kOk : kVerificationFailed;
    if (cfg.format == "csv") {
        out.primary = trace_csv(trace);
        out.secondary = dump(summary);
        out.secondary_suffix = ".summary.json";
    } else {
        out.primary = dump(Json{{"experiment", "page-curve"},
                                {"seed", cfg.seed},
                                {"samples", cfg.samples},
                                {"trace", trace_to_json(trace)},
                                {"summary", summary}});
    }
    std::ostringstream msg;
    msg << "page-curve s_bh=" << model.s_bh << " s_matter=" << model.s_matter << " plateau_deviation="
        << format_number(summary["plateau_deviation"].get<double>());
    out.message = msg.str();
    return out;
}

CommandOutput cmd_inequality_scan(const ExperimentConfig &cfg) {
    require_json(cfg);
    if (!is_known_inequality(cfg.inequality)) throw std::invalid_argument("unknown inequality: " + cfg.inequality);
    if (cfg.trials < 1) throw std::invalid_argument("trials must be at least 1");
    const StateGenerator gen{cfg.qubits};
    const ScanSummary summary = scan_random(gen, cfg.inequality, cfg.trials, Seed{cfg.seed});

    Json j = to_json(summary);
    j["register_qubits"] = cfg.qubits;
    j["seed"] = cfg.seed;
    CommandOutput out;
    if (cfg.inequality == "entropy-monotonicity") {
        // Falsifier mode: success means the inequality is shown to be false.
        const auto cx = entropy_monotonicity_counterexample();
        j["counterexample"] = Json{{"state", state_to_json(cx.state)}, {"x", cx.x}, {"y", cx.y},
                                   {"S_X", cx.s_x}, {"S_XY", cx.s_xy}, {"violation", cx.violation}};
        out.exit_code = cx.violation >= 1.0 - kEntropyTol ? kOk : kVerificationFailed;
        out.message = "entropy-monotonicity is false: Bell pair violation " + format_number(cx.violation) + " bits";
    } else {
        j["max_form_gap"] = summary.max_form_gap;
        out.exit_code = summary.min_slack >= -kEntropyTol ? kOk : kVerificationFailed;
        out.message = cfg.inequality + " min slack " + format_number(summary.min_slack) + " over " +
                      std::to_string(cfg.trials) + " trials";
    }
    out.primary = dump(j);
    return out;
}

namespace {

struct EpochTrial {
    Seed seed;
    std::optional<InequalityResult> main, firewall, interior, matter;
    double signaling = 0.0;
    double unitary_invariance_gap = 0.0;
};

} // namespace

CommandOutput cmd_causal_epoch(const ExperimentConfig &cfg) {
    check_format(cfg);
    if (cfg.trials < 1) throw std::invalid_argument("trials must be at least 1");
    const EpochSpec spec{cfg.b, cfg.c, cfg.nprime, cfg.rprime, cfg.r, 0};
    spec.validate();
    if (spec.b + spec.n() > 12) throw std::invalid_argument("b + n must be at most 12 to compose the full unitary");
    const InitialKind kind = parse_initial(cfg.initial);
    const bool with_matter = cfg.i > 0 && !cfg.noncausal;
    const MatterEpochSpec matter{cfg.b, cfg.c, cfg.nprime + cfg.i, cfg.rprime, cfg.r, cfg.i, 0, cfg.i};
    if (with_matter) matter.validate();

    const QubitSet interior_in = local_range(0, spec.b);
    const QubitSet exterior_out = local_range(spec.b + spec.c, spec.nprime + spec.rprime);
    const Seed root{cfg.seed};

    std::vector<EpochTrial> trials(static_cast<std::size_t>(cfg.trials));
    parallel_for(trials.size(), [&](std::size_t t) {
        EpochTrial &tr = trials[t];
        tr.seed = root.child(t);
        const PureState initial = initial_state(spec, kind, tr.seed.child(10), cfg.pairs);
        const Partition labels = spec.initial_partition();
        if (cfg.noncausal) {
            const Unitary u = haar_unitary(Eigen::Index{1} << (spec.b + spec.n()), tr.seed.child(11));
            tr.interior = bound_interior(u, initial, labels, spec.Rprime());
            tr.signaling = signaling_deviation(u, interior_in, exterior_out, cfg.probes, tr.seed.child(12));
            return;
        }
        const CausalEpoch epoch = random_epoch(spec, tr.seed);
        const EpochRun run = run_epoch(epoch, initial);
        tr.main = bound_main(run);
        tr.firewall = bound_firewall_recast(run);
        const Unitary u = compose_full_unitary(epoch);
        tr.interior = bound_interior(u, initial, labels, spec.Rprime());
        tr.signaling = signaling_deviation(u, interior_in, exterior_out, cfg.probes, tr.seed.child(12));
        const QubitSet cnr = disjoint_union({spec.C(), spec.Nprime(), spec.Rprime()});
        tr.unitary_invariance_gap = std::abs(mutual_information(run.intermediate, cnr, spec.R()) - tr.main->rhs);
        if (with_matter) {
            const CausalEpoch me = random_epoch(matter.circuit_spec(), tr.seed.child(13));
            tr.matter = run_matter_epoch(matter, me, matter_initial_state(matter, tr.seed.child(14))).bound;
        }
    });

    bool ok = true;
    double min_slack = 0.0, max_signal = 0.0;
    Json rows = Json::array();
    std::ostringstream csv;
    csv.imbue(std::locale::classic());
    csv << "trial,seed,main_slack,firewall_slack,interior_slack,matter_slack,signaling_deviation\n";
    auto slack_or_null = [](const std::optional<InequalityResult> &r) { return r ? Json(r->slack) : Json(nullptr); };
    auto csv_cell = [](const std::optional<InequalityResult> &r) { return r ? format_number(r->slack) : std::string{}; };
    for (std::size_t t = 0; t < trials.size(); ++t) {
        const EpochTrial &tr = trials[t];
        for (const auto *r : {&tr.main, &tr.firewall, &tr.interior, &tr.matter}) {
            if (!*r) continue;
            min_slack = std::min(min_slack, (*r)->slack);
            ok = ok && (*r)->slack >= -kEntropyTol;
        }
        max_signal = std::max(max_signal, tr.signaling);
        if (!cfg.noncausal) ok = ok && tr.signaling <= kStateTol && tr.unitary_invariance_gap <= kEntropyTol;
        rows.push_back({{"trial", t},
                        {"seed", tr.seed.value()},
                        {"main", slack_or_null(tr.main)},
                        {"firewall_recast", slack_or_null(tr.firewall)},
                        {"interior", slack_or_null(tr.interior)},
                        {"matter", slack_or_null(tr.matter)},
                        {"signaling_deviation", tr.signaling},
                        {"unitary_invariance_gap", tr.unitary_invariance_gap}});
        csv << t << ',' << tr.seed.value() << ',' << csv_cell(tr.main) << ',' << csv_cell(tr.firewall) << ','
            << csv_cell(tr.interior) << ',' << csv_cell(tr.matter) << ',' << format_number(tr.signaling) << '\n';
    }

    CommandOutput out;
    out.exit_code = ok ? kOk : kVerificationFailed;
    if (cfg.format == "csv") {
        out.primary = csv.str();
    } else {
        Json j{{"experiment", "causal-epoch"},
               {"mode", cfg.noncausal ? "noncausal" : "causal"},
               {"spec", to_json(spec)},
               {"wiring", kWiringConvention},
               {"initial", cfg.initial},
               {"pairs", cfg.pairs},
               {"seed", cfg.seed},
               {"trials", rows},
               {"min_slack", min_slack},
               {"max_signaling_deviation", max_signal}};
        if (with_matter) j["matter_spec"] = to_json(matter);
        out.primary = dump(j);
    }
    out.message = std::string("causal-epoch ") + (cfg.noncausal ? "noncausal" : "causal") + " min slack " +
                  format_number(min_slack) + ", max signaling deviation " + format_number(max_signal);
    return out;
}

CommandOutput cmd_paradox(const ExperimentConfig &cfg) {
    require_json(cfg);
    CommandOutput out;
    if (cfg.analytic_only) {
        if (!cfg.mu) throw std::invalid_argument("analytic mode needs --mu");
        const double eta = eta_estimate(*cfg.mu, cfg.s_bh);
        const ParadoxReport report = paradox_report(eta, cfg.epsilon, cfg.s_bh, cfg.s_matter);
        out.primary = dump(Json{{"experiment", "paradox"},
                                {"mode", "analytic"},
                                {"mu", *cfg.mu},
                                {"report", to_json(report)},
                                {"verdict", paradox_verdict(report)}});
        out.message = paradox_verdict(report);
        return out;
    }

    ParadoxDemoConfig demo;
    demo.spec = EpochSpec{cfg.b, cfg.c, cfg.nprime, cfg.rprime, cfg.r, 0};
    demo.epochs = cfg.trials;
    demo.s_bh = checked_size(cfg.s_bh);
    demo.s_matter = cfg.s_matter;
    demo.eta = cfg.mu ? eta_estimate(*cfg.mu, cfg.s_bh) : cfg.eta;
    demo.page_samples = cfg.samples;
    const ParadoxDemoResult res = paradox_demo(demo, Seed{cfg.seed});

    Json epochs = Json::array();
    for (const auto &e : res.epochs)
        epochs.push_back({{"seed", e.seed.value()}, {"S_N_R", e.s_n_r}, {"S_Rp_R", e.s_rr}, {"slack", e.slack}});
    out.primary = dump(Json{{"experiment", "paradox"},
                            {"mode", "simulation"},
                            {"spec", to_json(demo.spec)},
                            {"seed", cfg.seed},
                            {"report", to_json(res.report)},
                            {"eta_target", res.eta_target},
                            {"initial_S_N_R", res.initial_s_n_r},
                            {"measured_max_S_Rp_R", res.max_s_rr},
                            {"causal_epsilon", res.causal_epsilon},
                            {"page_epsilon", res.page_epsilon},
                            {"page_k", res.page_k},
                            {"min_slack", res.min_slack},
                            {"epochs", epochs},
                            {"verdict", res.verdict}});
    out.exit_code = res.min_slack >= -kEntropyTol ? kOk : kVerificationFailed;
    out.message = res.verdict;
    return out;
}

} // namespace horizon::cli
