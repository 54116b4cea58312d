#pragma once

#include <optional>
#include <span>

#include "ramimo/trial.hpp"

namespace ramimo {

/// A point statistic with its standard error. `mean` is empty when the metric
/// is undefined for the sample (no detections at all), which is reported
/// distinctly from a legitimate 0.
struct Estimate {
    std::optional<double> mean;
    double std_error = 0.0;
};

/// Timing MSE pooled over every detected UE across the given trials, in both
/// units: mse_theta in samples^2 and mse_epsilon = mse_theta / n_fft^2 (the
/// offset-domain and timing-domain errors differ by exactly that factor).
struct MseMetrics {
    Estimate mse_theta;
    Estimate mse_epsilon;
    long detected_total = 0;
};

MseMetrics mse_metrics(std::span<const TrialOutcome> outcomes, int n_fft);

/// Mean UEs detected per trial (the throughput curve quantity).
Estimate throughput(std::span<const TrialOutcome> outcomes);

/// Mean fraction of contenders detected per trial; empty if n_active == 0.
Estimate detected_fraction(std::span<const TrialOutcome> outcomes, int n_active);

} // namespace ramimo
