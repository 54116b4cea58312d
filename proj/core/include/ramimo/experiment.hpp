#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ramimo/metrics.hpp"
#include "ramimo/system_config.hpp"
#include "ramimo/trial.hpp"

namespace ramimo {

/// One emitted statistic: a (grid point, mode, metric) triple.
struct SweepRow {
    std::string experiment;
    std::string param;   ///< name of the swept SystemConfig field
    double value = 0.0;  ///< swept value at this grid point
    std::string mode;    ///< proposed | baseline | oracle
    std::string metric;  ///< mse_epsilon | mse_theta | throughput | detected_fraction
    std::optional<double> mean; ///< empty when the metric is undefined
    double std_error = 0.0;
    long trials = 0;
    std::uint64_t seed = 0; ///< base seed; trial t used seed base+t
};

struct SweepTable {
    std::vector<SweepRow> rows;
};

/// Known experiment ids: "mse-vs-n", "throughput-vs-m", "throughput-vs-na".
/// Returns the base config with the experiment's fixed parameters applied,
/// before any caller overrides. Unknown id throws ConfigError.
SystemConfig experiment_defaults(const std::string& id, SystemConfig base);

/// Runs every grid point of the experiment in each requested mode. Trial t of
/// a grid point uses seed base_seed + t, so any row can be regenerated in
/// isolation. Modes defaults to all three when empty.
SweepTable run_experiment(const std::string& id, const SystemConfig& cfg,
                          long trials, std::uint64_t base_seed,
                          const std::vector<TrialMode>& modes = {});

/// Aggregates pre-computed outcomes into the four metric rows of one grid
/// point. Order-independent: permuting `outcomes` changes no emitted value.
std::vector<SweepRow> summarize_point(const std::string& experiment,
                                      const std::string& param, double value,
                                      TrialMode mode, const SystemConfig& cfg,
                                      std::span<const TrialOutcome> outcomes,
                                      std::uint64_t base_seed);

/// CSV with header experiment,param,value,mode,metric,mean,stderr,trials,seed.
/// Numbers are printed with enough digits to round-trip, so a rewritten table
/// is byte-identical.
void write_csv(const SweepTable& table, std::ostream& out);

/// Runs `trials` independent trials with seeds base_seed + t, in parallel,
/// outcome order fixed by trial index.
std::vector<TrialOutcome> run_many(const SystemConfig& cfg, long trials,
                                   std::uint64_t base_seed, TrialMode mode);

} // namespace ramimo
