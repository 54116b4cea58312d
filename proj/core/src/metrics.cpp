#include "ramimo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ramimo {

namespace {

// Mean and standard error of a sample, summed in sorted order so the result
// does not depend on how the caller ordered the values.
Estimate stable_estimate(std::vector<double> values) {
    Estimate est;
    if (values.empty()) return est;
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (const double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    est.mean = mean;
    if (values.size() > 1) {
        double ss = 0.0;
        for (const double v : values) ss += (v - mean) * (v - mean);
        const double var = ss / static_cast<double>(values.size() - 1);
        est.std_error = std::sqrt(var / static_cast<double>(values.size()));
    }
    return est;
}

} // namespace

MseMetrics mse_metrics(std::span<const TrialOutcome> outcomes, int n_fft) {
    std::vector<double> sq_errors;
    for (const auto& trial : outcomes)
        for (const auto& ue : trial.ues)
            if (ue.detected) sq_errors.push_back(ue.sq_error_theta);

    MseMetrics m;
    m.detected_total = static_cast<long>(sq_errors.size());
    m.mse_theta = stable_estimate(std::move(sq_errors));
    if (m.mse_theta.mean) {
        const double scale = static_cast<double>(n_fft) * n_fft;
        m.mse_epsilon.mean = *m.mse_theta.mean / scale;
        m.mse_epsilon.std_error = m.mse_theta.std_error / scale;
    }
    return m;
}

Estimate throughput(std::span<const TrialOutcome> outcomes) {
    std::vector<double> counts;
    counts.reserve(outcomes.size());
    for (const auto& trial : outcomes)
        counts.push_back(static_cast<double>(trial.detected_count));
    return stable_estimate(std::move(counts));
}

Estimate detected_fraction(std::span<const TrialOutcome> outcomes, int n_active) {
    if (n_active <= 0) return {};
    std::vector<double> fractions;
    fractions.reserve(outcomes.size());
    for (const auto& trial : outcomes)
        fractions.push_back(static_cast<double>(trial.detected_count) / n_active);
    return stable_estimate(std::move(fractions));
}

} // namespace ramimo
