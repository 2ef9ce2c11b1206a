#include <horizon/evaporation.hpp>
#include <horizon/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace horizon {

void EvaporationModel::validate() const {
    if (s_bh < 1) throw std::invalid_argument("evaporation model: s_bh must be positive");
    if (s_matter < 0 || s_matter > s_bh) throw std::invalid_argument("evaporation model: need 0 <= s_matter <= s_bh");
    if (s_bh + s_matter > kMaxEvaporationQubits) throw std::invalid_argument("evaporation model: s_bh + s_matter exceeds 22");
    if (samples < 1) throw std::invalid_argument("evaporation model: need at least one sample");
}

PureState scrambled_hole_state(int s_bh, int s_matter, Seed seed) {
    EvaporationModel{s_bh, s_matter, 1, seed}.validate();
    const Eigen::Index hole_dim = Eigen::Index{1} << s_bh;
    const Eigen::Index ref_dim = Eigen::Index{1} << s_matter;
    const ComplexMatrix iso = haar_isometry(hole_dim, ref_dim, seed);
    // Column-major storage puts the hole index fastest, matching the register layout.
    ComplexVector amps = Eigen::Map<const ComplexVector>(iso.data(), hole_dim * ref_dim);
    amps /= std::sqrt(static_cast<double>(ref_dim));
    return PureState::from_amplitudes(std::move(amps));
}

EvaporationTrace simulate_page_trace(const EvaporationModel &model) {
    model.validate();
    const int kmax = model.s_bh;
    EvaporationTrace trace{model.s_bh, model.s_matter, {}, Eigen::MatrixXd(model.samples, kmax + 1),
                           Eigen::MatrixXd(model.samples, kmax + 1)};

    parallel_for(static_cast<std::size_t>(model.samples), [&](std::size_t t) {
        const PureState state = scrambled_hole_state(model.s_bh, model.s_matter, model.seed.child(t));
        QubitSet hole(static_cast<std::size_t>(model.s_bh));
        std::iota(hole.begin(), hole.end(), 0);
        const auto row = static_cast<Eigen::Index>(t);
        for (int k = 0; k <= kmax; ++k) {
            const std::span<const int> early(hole.data(), static_cast<std::size_t>(k));
            const std::span<const int> late(hole.data() + k, static_cast<std::size_t>(kmax - k));
            const double s_r = entropy_of_subsystem(state, early);
            const double s_rp = entropy_of_subsystem(state, late);
            trace.s_r(row, k) = s_r;
            trace.mi(row, k) = s_r + s_rp - model.s_matter;
        }
    });

    const double n = model.samples;
    auto stddev = [n](const auto &col, double mean) {
        if (n < 2) return 0.0;
        return std::sqrt((col.array() - mean).square().sum() / (n - 1));
    };
    for (int k = 0; k <= kmax; ++k) {
        TracePoint p;
        p.k = k;
        p.mean_s_r = trace.s_r.col(k).mean();
        p.std_s_r = stddev(trace.s_r.col(k), p.mean_s_r);
        p.mean_mi = trace.mi.col(k).mean();
        p.std_mi = stddev(trace.mi.col(k), p.mean_mi);
        trace.points.push_back(p);
    }
    return trace;
}

namespace {

void check_k(int k, int s_bh, int s_matter) {
    if (s_bh < 0 || s_matter < 0) throw std::invalid_argument("predictor: negative size");
    if (k < 0 || k > s_bh) throw std::invalid_argument("predictor: k out of range");
}

} // namespace

double predicted_entropy(int k, int s_bh, int s_matter) {
    check_k(k, s_bh, s_matter);
    return std::min(k, s_bh + s_matter - k);
}

double predicted_mi(int k, int s_bh, int s_matter) {
    check_k(k, s_bh, s_matter);
    return std::max(0, std::min({2 * k, s_bh - s_matter, 2 * (s_bh - k)}));
}

double eta_estimate(double mu, double s_bh) {
    if (!(mu > 0.0) || !(s_bh > 0.0)) throw std::invalid_argument("eta_estimate: inputs must be positive");
    return std::exp(0.25 * (3.0 * std::log(mu) - std::log(s_bh)));
}

double eta_estimate(const NeighborhoodSpec &nbhd, double s_bh) {
    if (nbhd.mu < 1.0) throw std::invalid_argument("eta_estimate: mu must be at least 1");
    if (!(nbhd.area > 0.0)) throw std::invalid_argument("eta_estimate: area must be positive");
    return eta_estimate(nbhd.mu, s_bh);
}

double matter_entropy_bound(double area) {
    if (!(area > 0.0)) throw std::invalid_argument("matter_entropy_bound: area must be positive");
    // sqrt * sqrt(sqrt) keeps perfect fourth powers exact.
    const double root = std::sqrt(area);
    return root * std::sqrt(root);
}

double epsilon_from_trace(const EvaporationTrace &trace, int k) {
    if (k < 0 || k >= static_cast<int>(trace.points.size())) throw std::invalid_argument("epsilon_from_trace: k out of range");
    const double eps = 1.0 - (trace.points[static_cast<std::size_t>(k)].mean_mi + trace.s_matter) / trace.s_bh;
    return std::max(0.0, eps);
}

std::pair<double, int> tightest_epsilon(const EvaporationTrace &trace) {
    if (trace.points.empty()) throw std::invalid_argument("tightest_epsilon: empty trace");
    std::pair<double, int> best{epsilon_from_trace(trace, 0), 0};
    for (int k = 1; k < static_cast<int>(trace.points.size()); ++k) {
        const double eps = epsilon_from_trace(trace, k);
        if (eps < best.first) best = {eps, k};
    }
    return best;
}

ParadoxReport paradox_report(double eta, double epsilon, double s_bh, double s_matter) {
    if (!(s_bh > 0.0)) throw std::invalid_argument("paradox_report: s_bh must be positive");
    if (eta < 0.0 || epsilon < 0.0 || s_matter < 0.0) throw std::invalid_argument("paradox_report: inputs must be nonnegative");
    ParadoxReport r;
    r.eta = eta;
    r.epsilon = epsilon;
    r.s_bh = s_bh;
    r.s_matter = s_matter;
    r.margin_no_matter = epsilon + eta - 1.0;
    r.margin_matter = epsilon + eta - (1.0 - s_matter / s_bh);
    r.contradiction = r.margin_matter < 0.0;
    return r;
}

InequalityResult weak_correspondence_check(const PureState &state, std::span<const int> n, std::span<const int> other,
                                           double eta, double s_bh) {
    if (eta < 0.0 || s_bh < 0.0) throw std::invalid_argument("weak_correspondence_check: negative budget");
    return InequalityResult::make("weak-correspondence", mutual_information(state, n, other), eta * s_bh);
}

std::string paradox_verdict(const ParadoxReport &report) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(6);
    const double need = 1.0 - report.s_matter / report.s_bh;
    if (report.contradiction) {
        os << "contradiction: eps + eta = " << report.epsilon + report.eta << " < 1 - S_matter/S_BH = " << need
           << "; with unitary evaporation and weak correspondence held fixed, a causal horizon cannot supply the"
              " late-early radiation correlation, so the ideal classically-causal horizon fails";
    } else {
        os << "no contradiction: eps + eta = " << report.epsilon + report.eta << " >= 1 - S_matter/S_BH = " << need;
    }
    return os.str();
}

ParadoxDemoResult paradox_demo(const ParadoxDemoConfig &config, Seed seed) {
    config.spec.validate();
    if (config.epochs < 1) throw std::invalid_argument("paradox_demo: need at least one epoch");
    if (config.eta < 0.0) throw std::invalid_argument("paradox_demo: eta must be nonnegative");
    const EvaporationModel model{config.s_bh, config.s_matter, config.page_samples, seed.child(0)};
    model.validate();

    const int capacity = std::min(config.spec.n(), config.spec.r);
    const int pairs = std::min(capacity, static_cast<int>(std::floor(config.eta * config.s_bh / 2.0)));

    ParadoxDemoResult out;
    out.eta_target = config.eta;
    out.epochs.resize(static_cast<std::size_t>(config.epochs));
    parallel_for(out.epochs.size(), [&](std::size_t t) {
        const Seed s = seed.child(1).child(t);
        const CausalEpoch epoch = random_epoch(config.spec, s);
        const EpochRun run = run_epoch(epoch, initial_state(config.spec, InitialKind::Pairs, s, pairs));
        const InequalityResult b = bound_main(run);
        out.epochs[t] = ParadoxEpochRecord{s, b.rhs, b.lhs, b.slack};
    });

    out.initial_s_n_r = out.epochs.front().s_n_r;
    out.min_slack = out.epochs.front().slack;
    for (const auto &e : out.epochs) {
        out.max_s_rr = std::max(out.max_s_rr, e.s_rr);
        out.min_slack = std::min(out.min_slack, e.slack);
    }
    out.causal_epsilon = std::max(0.0, 1.0 - (out.max_s_rr + config.s_matter) / config.s_bh);

    out.page_trace = simulate_page_trace(model);
    std::tie(out.page_epsilon, out.page_k) = tightest_epsilon(out.page_trace);
    out.report = paradox_report(config.eta, out.page_epsilon, config.s_bh, config.s_matter);
    out.verdict = paradox_verdict(out.report);
    return out;
}

} // namespace horizon
