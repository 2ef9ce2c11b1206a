// horizon: deterministic experiment runner.
//
//   horizon page-curve      --s-bh 14 --s-matter 0 --samples 20 --seed 1 --out trace.csv --format csv
//   horizon inequality-scan --inequality ssa --trials 500 --seed 1
//   horizon causal-epoch    --b 3 --c 1 --nprime 2 --rprime 2 --r 4 --trials 100
//   horizon paradox         --s-bh 12 --eta 0 --trials 50
//
// Any option may also come from a JSON file given with --config (keys are the long
// option names without dashes, '-' written as '_'); explicit flags win.

#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>

using horizon::Json;
using namespace horizon::cli;

namespace {

struct Binder {
    CLI::App *app;
    std::vector<std::function<void(const Json &)>> from_file;

    template <typename T>
    CLI::Option *add(const std::string &name, T &target, const std::string &help) {
        CLI::Option *opt = app->add_option("--" + name, target, help)->capture_default_str();
        register_key(name, opt, target);
        return opt;
    }

    CLI::Option *flag(const std::string &name, bool &target, const std::string &help) {
        CLI::Option *opt = app->add_flag("--" + name, target, help);
        register_key(name, opt, target);
        return opt;
    }

    template <typename T>
    void register_key(std::string name, CLI::Option *opt, T &target) {
        std::replace(name.begin(), name.end(), '-', '_');
        from_file.emplace_back([name, opt, &target](const Json &file) {
            if (opt->count() == 0 && file.contains(name)) {
                if constexpr (std::is_same_v<T, std::optional<double>>)
                    target = file.at(name).get<double>();
                else
                    target = file.at(name).get<T>();
            }
        });
    }
};

void add_common(Binder &bind, ExperimentConfig &cfg) {
    bind.add("seed", cfg.seed, "experiment seed");
    bind.add("out", cfg.out, "output path (stdout when empty)");
    bind.add("format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void add_epoch(Binder &bind, ExperimentConfig &cfg) {
    bind.add("b", cfg.b, "interior qubits B");
    bind.add("c", cfg.c, "reverse-channel qubits C");
    bind.add("nprime", cfg.nprime, "retained neighborhood qubits N'");
    bind.add("rprime", cfg.rprime, "new radiation qubits R'");
    bind.add("r", cfg.r, "early radiation qubits R");
}

int emit(const ExperimentConfig &cfg, const CommandOutput &out) {
    if (cfg.out.empty()) {
        std::cout << out.primary;
        if (!out.secondary.empty()) std::cout << out.secondary;
    } else {
        horizon::write_file_atomic(cfg.out, out.primary);
        if (!out.secondary.empty()) horizon::write_file_atomic(cfg.out + out.secondary_suffix, out.secondary);
    }
    std::cerr << out.message << '\n';
    return out.exit_code;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Black-hole evaporation and causal-horizon numerics"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; flags override its values");

    std::map<std::string, ExperimentConfig> configs;
    std::map<std::string, Binder> binders;
    std::map<std::string, std::function<CommandOutput(const ExperimentConfig &)>> runners{
        {"page-curve", cmd_page_curve},
        {"inequality-scan", cmd_inequality_scan},
        {"causal-epoch", cmd_causal_epoch},
        {"paradox", cmd_paradox}};

    auto make = [&](const std::string &name, const std::string &help) -> std::pair<Binder &, ExperimentConfig &> {
        CLI::App *sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON config file; flags override its values");
        auto &cfg = configs[name];
        cfg.experiment = name;
        auto &bind = binders[name];
        bind.app = sub;
        add_common(bind, cfg);
        return {bind, cfg};
    };

    {
        auto [bind, cfg] = make("page-curve", "simulate S(R) and S(R':R) for a scrambled hole");
        cfg.format = "csv";
        cfg.s_bh = 14;
        bind.add("s-bh", cfg.s_bh, "hole qubits S_BH");
        bind.add("s-matter", cfg.s_matter, "matter/reference qubits S_matter");
        bind.add("samples", cfg.samples, "Monte Carlo samples");
    }
    {
        auto [bind, cfg] = make("inequality-scan", "scan random states for entropic inequality violations");
        cfg.trials = 500;
        bind.add("inequality", cfg.inequality, "ssa, mi-monotonicity or entropy-monotonicity");
        bind.add("trials", cfg.trials, "number of random instances");
        bind.add("qubits", cfg.qubits, "register size");
    }
    {
        auto [bind, cfg] = make("causal-epoch", "run random epochs and check the circuit bounds");
        add_epoch(bind, cfg);
        bind.add("trials", cfg.trials, "number of random epochs");
        bind.add("initial", cfg.initial, "haar, product or pairs")->check(CLI::IsMember({"haar", "product", "pairs"}));
        bind.add("pairs", cfg.pairs, "N-R Bell pairs for --initial pairs");
        bind.add("i", cfg.i, "infallen-matter qubits for the matter bound (0 disables)");
        bind.add("probes", cfg.probes, "Haar probes for large signaling checks");
        bind.flag("noncausal", cfg.noncausal, "replace V, W by one Haar unitary across the horizon");
    }
    {
        auto [bind, cfg] = make("paradox", "weak correspondence vs unitary evaporation under a causal horizon");
        cfg.trials = 50;
        add_epoch(bind, cfg);
        bind.add("s-bh", cfg.s_bh, "S_BH (qubits in simulation, any positive value in analytic mode)");
        bind.add("s-matter", cfg.s_matter, "S_matter");
        bind.add("samples", cfg.samples, "Monte Carlo samples for the evaporation model");
        bind.add("trials", cfg.trials, "number of causal epochs");
        bind.add("eta", cfg.eta, "weak-correspondence budget eta");
        bind.add("mu", cfg.mu, "neighborhood area ratio; sets eta = (mu^3 / S_BH)^(1/4)");
        bind.add("epsilon", cfg.epsilon, "epsilon for analytic mode");
        bind.flag("analytic-only", cfg.analytic_only, "skip simulation, evaluate the analytic estimates");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsageError;
    }

    for (auto &[name, cfg] : configs) {
        CLI::App *sub = app.get_subcommand(name);
        if (!sub->parsed()) continue;
        try {
            if (!config_path.empty()) {
                std::ifstream in(config_path);
                if (!in) throw std::invalid_argument("cannot read config file " + config_path);
                const Json file = Json::parse(in);
                for (auto &apply : binders[name].from_file) apply(file);
            }
            return emit(cfg, runners[name](cfg));
        } catch (const std::exception &e) {
            std::cerr << "error: " << e.what() << '\n';
            return kUsageError;
        }
    }
    return kUsageError;
}
