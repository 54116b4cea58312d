// Command line front end for the random access simulator.
//
//   ramimo simulate --experiment <id> [--trials N] [--seed S] [--out PATH] ...
//   ramimo run-once --config <file> [--seed S] [--mode M] [--out PATH]
//
// Exit codes: 0 success, 1 configuration error, 2 I/O error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "ramimo/experiment.hpp"
#include "ramimo/system_config.hpp"
#include "ramimo/trial.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::ios_base::failure("cannot open output file: " + path);
    return file;
}

int run_simulate(const std::string& experiment, long trials, std::uint64_t seed,
                 const std::string& out_path, const ramimo::SystemConfig& cfg,
                 const std::vector<ramimo::TrialMode>& modes) {
    const ramimo::SweepTable table =
        ramimo::run_experiment(experiment, cfg, trials, seed, modes);
    std::ofstream file;
    std::ostream& out = open_output(out_path, file);
    ramimo::write_csv(table, out);
    out.flush();
    if (!out) throw std::ios_base::failure("error writing output: " + out_path);
    return kExitOk;
}

void dump_trial(const ramimo::TrialOutcome& outcome, std::ostream& out) {
    out << "seed " << outcome.seed << "\n";
    out << "detected " << outcome.detected_count << " of " << outcome.ues.size() << "\n";
    for (const auto& ue : outcome.ues) {
        out << "ue " << ue.ue_index << " theta " << ue.theta << " offset " << ue.offset;
        if (ue.detected)
            out << " detected round " << ue.round << " theta_hat " << ue.theta_hat;
        else
            out << " undetected";
        out << "\n";
    }
}

int run_once(const std::string& config_path, std::optional<std::uint64_t> seed,
             const std::string& mode_name, const std::string& out_path) {
    ramimo::SystemConfig cfg = ramimo::SystemConfig::from_file(config_path);
    const ramimo::TrialMode mode = ramimo::trial_mode_from_string(mode_name);
    const std::uint64_t use_seed = seed.value_or(cfg.seed);
    const ramimo::TrialOutcome outcome = ramimo::run_trial(cfg, use_seed, mode);
    std::ofstream file;
    std::ostream& out = open_output(out_path, file);
    dump_trial(outcome, out);
    out.flush();
    if (!out) throw std::ios_base::failure("error writing output: " + out_path);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Link-level simulator of grant-free random access over massive MIMO"};
    app.require_subcommand(1);

    // simulate
    std::string experiment;
    long trials = 1000;
    std::uint64_t seed = 1;
    std::string out_path = "-";
    std::string mode_filter;
    ramimo::SystemConfig overrides; // CLI-provided fields win over the experiment defaults
    int opt_m = 0, opt_n = 0, opt_q = 0, opt_na = 0;
    double opt_snr = 0.0;

    CLI::App* sim = app.add_subcommand("simulate", "Run a full experiment sweep to CSV");
    sim->add_option("--experiment", experiment,
                    "mse-vs-n | throughput-vs-m | throughput-vs-na")->required();
    sim->add_option("--trials", trials, "Monte Carlo trials per grid point")
        ->check(CLI::PositiveNumber);
    sim->add_option("--seed", seed, "base seed; trial t uses seed+t");
    sim->add_option("--out", out_path, "output CSV path, '-' for stdout");
    auto* o_snr = sim->add_option("--snr-db", opt_snr, "uplink SNR in dB (inf = noiseless)");
    auto* o_m = sim->add_option("--m", opt_m, "antennas at the BS");
    auto* o_n = sim->add_option("--n-subcarriers", opt_n, "pilot subcarriers");
    auto* o_q = sim->add_option("--q", opt_q, "pilot symbols / time codes");
    auto* o_na = sim->add_option("--n-active", opt_na, "contending UEs");
    sim->add_option("--mode", mode_filter, "restrict to proposed|baseline|oracle");

    // run-once
    std::string config_path;
    std::optional<std::uint64_t> once_seed;
    std::string once_mode = "proposed";
    std::string once_out = "-";
    CLI::App* once = app.add_subcommand("run-once", "Run one trial from a config file");
    once->add_option("--config", config_path, "key=value config file")->required();
    once->add_option("--seed", once_seed, "seed override (default: config seed)");
    once->add_option("--mode", once_mode, "proposed|baseline|oracle");
    once->add_option("--out", once_out, "output path, '-' for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (sim->parsed()) {
            ramimo::SystemConfig cfg = ramimo::experiment_defaults(experiment, overrides);
            if (*o_snr) cfg.snr_db = opt_snr;
            if (*o_m) cfg.m_antennas = opt_m;
            if (*o_n) cfg.n_subcarriers = opt_n;
            if (*o_q) cfg.q_symbols = opt_q;
            if (*o_na) cfg.n_active = opt_na;
            cfg.seed = seed;
            cfg.validate();
            std::vector<ramimo::TrialMode> modes;
            if (!mode_filter.empty())
                modes.push_back(ramimo::trial_mode_from_string(mode_filter));
            return run_simulate(experiment, trials, seed, out_path, cfg, modes);
        }
        return run_once(config_path, once_seed, once_mode, once_out);
    } catch (const ramimo::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}
