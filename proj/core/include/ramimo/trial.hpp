#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ramimo/estimator.hpp"
#include "ramimo/population.hpp"
#include "ramimo/system_config.hpp"

namespace ramimo {

/// What the simulator runs per trial: the two finite-M estimator variants, or
/// the large-antenna limit of the proposed scheme (exact reference vector and
/// covariance, count known, offset-matched detection).
enum class TrialMode { proposed, baseline, oracle };

TrialMode trial_mode_from_string(const std::string& s); ///< throws ConfigError
std::string to_string(TrialMode mode);

/// Per-UE outcome of one access attempt.
struct UeOutcome {
    int ue_index = 0;
    double theta = 0.0;           ///< ground truth, samples
    double offset = 0.0;          ///< ground truth effective offset (round 1)
    bool detected = false;
    int round = 0;                ///< 1-based round of detection, 0 if none
    double theta_hat = 0.0;       ///< delivered timing (valid iff detected)
    double sq_error_theta = 0.0;  ///< (theta_hat - theta)^2 (valid iff detected)
};

struct TrialOutcome {
    std::uint64_t seed = 0;
    int detected_count = 0;
    std::vector<UeOutcome> ues;
};

/// One full access attempt (up to cfg.max_rounds) on a freshly drawn
/// population. Same (cfg, seed, mode) twice gives bit-identical outcomes.
TrialOutcome run_trial(const SystemConfig& cfg, std::uint64_t seed, TrialMode mode);

/// run_trial on a caller-supplied population; `rng` continues the caller's
/// stream. Used by tests that need hand-built geometries.
TrialOutcome run_trial_on(const SystemConfig& cfg, Population pop,
                          std::uint64_t seed, std::mt19937_64& rng, TrialMode mode);

/// Large-antenna limit: the estimation chain runs on exact statistics and a
/// UE counts as detected when exactly one recovered offset falls within
/// cfg.detect_match_tol of its own and no other contender on the same code is
/// inside that tolerance. EstimatorMode picks whether the power-sum stage runs.
TrialOutcome oracle_trial(const SystemConfig& cfg, std::uint64_t seed,
                          EstimatorMode est_mode);

} // namespace ramimo
