#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "ramimo/population.hpp"

namespace ramimo {

/// Small-scale fading for one coherence block: column k holds g_k over the M
/// antennas, iid CN(0,1).
struct ChannelRealization {
    Eigen::MatrixXcd g; ///< M x K
};

/// What each BS antenna receives during the pilot phase.
struct PilotBlock {
    std::vector<Eigen::MatrixXcd> y; ///< per antenna, N x Q
    double noise_var = 0.0;          ///< per-sample variance that was applied
};

/// One precoded random access response: a beamforming weight vector paired
/// with the time code it is spread over.
struct PrecodedResponse {
    Eigen::VectorXcd weights; ///< length M, built from the BS's channel estimates
    int time_code = 0;
    double offset = 0.0;      ///< offset estimate this response was built from
};

ChannelRealization sample_channel(const Population& pop, int m_antennas,
                                  std::mt19937_64& rng);

/// Superimposes every active UE's pilot at each antenna:
///   Y_m = sum_k sqrt(rho_k beta_k) g_k^m c(eps_k) t_{i_k}^T + noise.
/// Power control makes the per-UE scale exactly 1. Noise is iid CN(0, sigma^2)
/// with sigma^2 = 10^(-snr_db/10). `time_codes` is the time_codebook() matrix;
/// it fixes Q, and n_subcarriers fixes N.
PilotBlock synthesize_uplink(const Population& pop, const ChannelRealization& ch,
                             int n_subcarriers, const Eigen::MatrixXcd& time_codes,
                             double snr_db, std::mt19937_64& rng);

/// Downlink observations at UE k for the given responses: row s is
///   h_k^H w_s t_{i_s}^T + noise,  h_k = sqrt(beta_k) g_k.
/// Noise is per-element CN(0, sigma^2) as on the uplink.
std::vector<Eigen::RowVectorXcd>
synthesize_downlink(const UeRecord& ue, const Eigen::VectorXcd& g_k,
                    const std::vector<PrecodedResponse>& responses,
                    const Eigen::MatrixXcd& time_codes, double snr_db,
                    std::mt19937_64& rng);

} // namespace ramimo
