#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <random>
#include <span>

#include "ramimo/population.hpp"

namespace ramimo {

/// Dispreads one downlink observation with the UE's own time code and scales
/// by 1/(Q M sqrt(beta)): a response precoded with this UE's channel converges
/// to 1 as M grows, any other response stays near 0.
std::complex<double> ue_correlate(const Eigen::RowVectorXcd& observed,
                                  const Eigen::VectorXcd& own_time_code,
                                  double beta, int m_antennas);

struct DetectionVerdict {
    bool detected = false;
    std::optional<int> matched_response; ///< index into the UE's response list
};

/// Rounds Re(r) per response. The UE declares success only when the rounded
/// values sum to exactly 1 with a single response contributing it; a sum of 0
/// (nobody answered me) or >= 2 (several responses look like mine, so my
/// offset collided) both mean Undetected.
DetectionVerdict detect(std::span<const std::complex<double>> r_values);

/// Timing error recovered from an offset estimate:
///   theta_hat = n_fft * ((l/N - eps_hat) mod 1),
/// folded into the admissible window [0, n_fft/N). The fold only matters when
/// estimation noise wraps the fractional part; exact offsets land inside it.
double recover_timing(int freq_code, int n_subcarriers, double offset_hat, int n_fft);

/// Uniform redraw of (l, i) for the next round. Throws std::logic_error if the
/// UE was already detected; detected UEs stay silent.
void reselect_codes(UeRecord& ue, const SystemConfig& cfg, std::mt19937_64& rng);

} // namespace ramimo
