#include <horizon/io.hpp>

#include <fstream>
#include <locale>
#include <sstream>

namespace horizon {

Json state_to_json(const PureState &state) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < state.dim(); ++i) out.push_back({state[i].real(), state[i].imag()});
    return out;
}

PureState state_from_json(const Json &j) {
    if (!j.is_array()) throw std::invalid_argument("state JSON must be an array of [re, im] pairs");
    ComplexVector amps(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto &pair = j[i];
        if (!pair.is_array() || pair.size() != 2) throw std::invalid_argument("state JSON entry must be [re, im]");
        amps(static_cast<Eigen::Index>(i)) = Complex{pair[0].get<double>(), pair[1].get<double>()};
    }
    return PureState::from_amplitudes(std::move(amps));
}

Json to_json(const InequalityResult &r) {
    return Json{{"name", r.name}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"slack", r.slack}, {"holds", r.holds}};
}

Json to_json(const ScanSummary &s) {
    return Json{{"name", s.name},
                {"trials", s.trials},
                {"min_slack", s.min_slack},
                {"argmin_seed", s.argmin_seed.value()},
                {"argmin_trial", s.argmin_trial}};
}

Json to_json(const EpochSpec &s) {
    return Json{{"b", s.b}, {"c", s.c}, {"nprime", s.nprime}, {"rprime", s.rprime},
                {"r", s.r}, {"n", s.n()}, {"extra", s.extra}};
}

Json to_json(const MatterEpochSpec &s) {
    return Json{{"b", s.b},           {"c", s.c},     {"nprime", s.nprime}, {"rprime", s.rprime},
                {"r", s.r},           {"i", s.i},     {"i_early", s.i_early}, {"ref", s.ref},
                {"neighborhood", s.neighborhood()}};
}

Json to_json(const ParadoxReport &r) {
    return Json{{"eta", r.eta},
                {"epsilon", r.epsilon},
                {"s_bh", r.s_bh},
                {"s_matter", r.s_matter},
                {"margin_no_matter", r.margin_no_matter},
                {"margin_matter", r.margin_matter},
                {"contradiction", r.contradiction}};
}

std::string format_number(double value) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(12);
    // Keep negative zero out of the output so identical traces print identically.
    os << (value == 0.0 ? 0.0 : value);
    return os.str();
}

std::string trace_csv(const EvaporationTrace &trace) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << "k,mean_S_R,std_S_R,mean_MI,std_MI,pred_S_R,pred_MI\n";
    for (const auto &p : trace.points) {
        os << p.k << ',' << format_number(p.mean_s_r) << ',' << format_number(p.std_s_r) << ','
           << format_number(p.mean_mi) << ',' << format_number(p.std_mi) << ','
           << format_number(predicted_entropy(p.k, trace.s_bh, trace.s_matter)) << ','
           << format_number(predicted_mi(p.k, trace.s_bh, trace.s_matter)) << '\n';
    }
    return os.str();
}

Json trace_to_json(const EvaporationTrace &trace) {
    Json rows = Json::array();
    for (const auto &p : trace.points) {
        rows.push_back({{"k", p.k},
                        {"mean_S_R", p.mean_s_r},
                        {"std_S_R", p.std_s_r},
                        {"mean_MI", p.mean_mi},
                        {"std_MI", p.std_mi},
                        {"pred_S_R", predicted_entropy(p.k, trace.s_bh, trace.s_matter)},
                        {"pred_MI", predicted_mi(p.k, trace.s_bh, trace.s_matter)}});
    }
    return Json{{"s_bh", trace.s_bh}, {"s_matter", trace.s_matter}, {"samples", trace.s_r.rows()}, {"rows", rows}};
}

void write_file_atomic(const std::filesystem::path &path, const std::string &content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw std::runtime_error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace horizon
