#include "ramimo/experiment.hpp"

#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <ostream>
#include <thread>

namespace ramimo {

namespace {

struct Grid {
    std::string param;
    std::vector<double> values;
    void (*apply)(SystemConfig&, double);
};

Grid grid_for(const std::string& id) {
    if (id == "mse-vs-n")
        return {"n_subcarriers",
                {8, 9, 10, 11, 12},
                [](SystemConfig& c, double v) { c.n_subcarriers = static_cast<int>(v); }};
    if (id == "throughput-vs-m")
        return {"m_antennas",
                {20, 50, 100, 200, 300, 400},
                [](SystemConfig& c, double v) { c.m_antennas = static_cast<int>(v); }};
    if (id == "throughput-vs-na")
        return {"n_active",
                {6, 8, 10, 12, 14, 16, 18, 20, 22},
                [](SystemConfig& c, double v) { c.n_active = static_cast<int>(v); }};
    throw ConfigError("unknown experiment '" + id +
                      "' (expected mse-vs-n|throughput-vs-m|throughput-vs-na)");
}

// Fixed-width float formatting that round-trips doubles, so regenerated
// tables compare byte for byte.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

SystemConfig experiment_defaults(const std::string& id, SystemConfig base) {
    (void)grid_for(id); // validate the id
    if (id == "mse-vs-n") {
        base.q_symbols = 2;
        base.m_antennas = 200;
        base.n_active = 6;
    } else if (id == "throughput-vs-m") {
        base.q_symbols = 2;
        base.n_subcarriers = 8;
        base.n_active = 14;
    } else if (id == "throughput-vs-na") {
        // n_subcarriers stays caller-chosen so the load sweep can be repeated
        // at different subcarrier budgets and the curves overlaid.
        base.q_symbols = 2;
        base.m_antennas = 200;
    }
    return base;
}

std::vector<TrialOutcome> run_many(const SystemConfig& cfg, long trials,
                                   std::uint64_t base_seed, TrialMode mode) {
    cfg.validate();
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
    if (trials == 0) return outcomes;

    const unsigned workers = std::min<unsigned>(
        std::max(1u, std::thread::hardware_concurrency()),
        static_cast<unsigned>(trials));
    std::atomic<long> next{0};
    auto worker = [&] {
        for (long t = next.fetch_add(1); t < trials; t = next.fetch_add(1))
            outcomes[static_cast<std::size_t>(t)] =
                run_trial(cfg, base_seed + static_cast<std::uint64_t>(t), mode);
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return outcomes;
}

std::vector<SweepRow> summarize_point(const std::string& experiment,
                                      const std::string& param, double value,
                                      TrialMode mode, const SystemConfig& cfg,
                                      std::span<const TrialOutcome> outcomes,
                                      std::uint64_t base_seed) {
    const MseMetrics mse = mse_metrics(outcomes, cfg.n_fft);
    const Estimate tput = throughput(outcomes);
    const Estimate frac = detected_fraction(outcomes, cfg.n_active);
    const long trials = static_cast<long>(outcomes.size());

    const auto row = [&](const std::string& metric, const Estimate& est) {
        return SweepRow{experiment, param,     value,          to_string(mode),
                        metric,     est.mean,  est.std_error,  trials,
                        base_seed};
    };
    return {row("mse_epsilon", mse.mse_epsilon), row("mse_theta", mse.mse_theta),
            row("throughput", tput), row("detected_fraction", frac)};
}

SweepTable run_experiment(const std::string& id, const SystemConfig& cfg,
                          long trials, std::uint64_t base_seed,
                          const std::vector<TrialMode>& modes) {
    const Grid grid = grid_for(id);
    const std::vector<TrialMode> run_modes =
        modes.empty() ? std::vector<TrialMode>{TrialMode::proposed, TrialMode::baseline,
                                               TrialMode::oracle}
                      : modes;
    SweepTable table;
    for (const double value : grid.values) {
        SystemConfig point = cfg;
        grid.apply(point, value);
        point.validate();
        for (const TrialMode mode : run_modes) {
            const auto outcomes = run_many(point, trials, base_seed, mode);
            auto rows = summarize_point(id, grid.param, value, mode, point,
                                        outcomes, base_seed);
            table.rows.insert(table.rows.end(), rows.begin(), rows.end());
        }
    }
    return table;
}

void write_csv(const SweepTable& table, std::ostream& out) {
    out << "experiment,param,value,mode,metric,mean,stderr,trials,seed\n";
    for (const auto& r : table.rows) {
        out << r.experiment << ',' << r.param << ',' << fmt(r.value) << ','
            << r.mode << ',' << r.metric << ',';
        if (r.mean) out << fmt(*r.mean) << ',' << fmt(r.std_error);
        else out << ',';
        out << ',' << r.trials << ',' << r.seed << '\n';
    }
}

} // namespace ramimo
