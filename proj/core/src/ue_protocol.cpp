#include "ramimo/ue_protocol.hpp"

#include <cmath>
#include <stdexcept>

namespace ramimo {

std::complex<double> ue_correlate(const Eigen::RowVectorXcd& observed,
                                  const Eigen::VectorXcd& own_time_code,
                                  double beta, int m_antennas) {
    if (observed.size() != own_time_code.size())
        throw std::invalid_argument("ue_correlate: observation/code length mismatch");
    const double q = static_cast<double>(own_time_code.size());
    // Dispread and undo the array gain and the large-scale fading: a response
    // aimed at this UE converges to ||g||^2 / M -> 1.
    const std::complex<double> corr = (observed * own_time_code.conjugate()).value();
    return corr / (q * m_antennas * std::sqrt(beta));
}

DetectionVerdict detect(std::span<const std::complex<double>> r_values) {
    long sum = 0;
    int ones = 0;
    int last_one = -1;
    for (std::size_t s = 0; s < r_values.size(); ++s) {
        const long v = std::lround(r_values[s].real());
        sum += v;
        if (v == 1) {
            ++ones;
            last_one = static_cast<int>(s);
        }
    }
    DetectionVerdict verdict;
    if (sum == 1 && ones == 1) {
        verdict.detected = true;
        verdict.matched_response = last_one;
    }
    return verdict;
}

double recover_timing(int freq_code, int n_subcarriers, double offset_hat, int n_fft) {
    double frac = std::fmod(static_cast<double>(freq_code) / n_subcarriers - offset_hat, 1.0);
    if (frac < 0.0) frac += 1.0;
    // Fold into the admissible window [0, 1/N); noise can push the wrapped
    // fraction past it, but no physical delay lives there.
    const double window = 1.0 / n_subcarriers;
    frac = std::fmod(frac, window);
    return static_cast<double>(n_fft) * frac;
}

void reselect_codes(UeRecord& ue, const SystemConfig& cfg, std::mt19937_64& rng) {
    if (ue.detected_round.has_value())
        throw std::logic_error("reselect_codes: UE already detected");
    std::uniform_int_distribution<int> pick_l(0, cfg.n_subcarriers - 1);
    std::uniform_int_distribution<int> pick_i(0, cfg.q_symbols - 1);
    assign_codes(ue, pick_l(rng), pick_i(rng), cfg);
}

} // namespace ramimo
