#include "ramimo/airlink.hpp"

#include "ramimo/codebook.hpp"
#include "ramimo/rng.hpp"

namespace ramimo {

ChannelRealization sample_channel(const Population& pop, int m_antennas,
                                  std::mt19937_64& rng) {
    if (pop.empty()) throw std::invalid_argument("sample_channel: empty population");
    ChannelRealization ch;
    ch.g = complex_gaussian(m_antennas, static_cast<Eigen::Index>(pop.size()), 1.0, rng);
    return ch;
}

PilotBlock synthesize_uplink(const Population& pop, const ChannelRealization& ch,
                             int n_subcarriers, const Eigen::MatrixXcd& time_codes,
                             double snr_db, std::mt19937_64& rng) {
    if (ch.g.cols() != static_cast<Eigen::Index>(pop.size()))
        throw std::invalid_argument("synthesize_uplink: channel/population size mismatch");
    const int m_antennas = static_cast<int>(ch.g.rows());
    const int q = static_cast<int>(time_codes.rows());
    const double noise_var = std::pow(10.0, -snr_db / 10.0);

    // Rank-one pilot of each active UE, scaled by its power control (exactly
    // 1 by construction, but spelled out so the normalization stays visible).
    std::vector<Eigen::MatrixXcd> pilots(pop.size());
    for (std::size_t k = 0; k < pop.size(); ++k) {
        const auto& ue = pop[k];
        if (!ue.active) continue;
        const double scale = std::sqrt(ue.rho * ue.beta);
        pilots[k] = scale * steering(ue.offset, n_subcarriers) *
                    time_codes.col(ue.time_code).transpose();
    }

    PilotBlock block;
    block.noise_var = noise_var;
    block.y.reserve(static_cast<std::size_t>(m_antennas));
    for (int m = 0; m < m_antennas; ++m) {
        Eigen::MatrixXcd y = complex_gaussian(n_subcarriers, q, noise_var, rng);
        for (std::size_t k = 0; k < pop.size(); ++k)
            if (pop[k].active) y += ch.g(m, static_cast<Eigen::Index>(k)) * pilots[k];
        block.y.push_back(std::move(y));
    }
    return block;
}

std::vector<Eigen::RowVectorXcd>
synthesize_downlink(const UeRecord& ue, const Eigen::VectorXcd& g_k,
                    const std::vector<PrecodedResponse>& responses,
                    const Eigen::MatrixXcd& time_codes, double snr_db,
                    std::mt19937_64& rng) {
    // The broadcast is modeled in the same power-controlled units as the
    // uplink: the UE's observation noise is scaled by sqrt(beta_k), so after
    // the 1/(M sqrt(beta_k)) correlation the noise floor is sigma^2/(Q M^2)
    // and the large-scale gain cancels end to end, mirroring rho_k beta_k = 1.
    const double noise_var = std::pow(10.0, -snr_db / 10.0) * ue.beta;
    const Eigen::VectorXcd h_k = std::sqrt(ue.beta) * g_k;
    std::vector<Eigen::RowVectorXcd> observed;
    observed.reserve(responses.size());
    for (const auto& resp : responses) {
        if (resp.weights.size() != g_k.size())
            throw std::invalid_argument("synthesize_downlink: weight/channel length mismatch");
        const std::complex<double> gain = h_k.dot(resp.weights); // h_k^H w
        Eigen::RowVectorXcd row = gain * time_codes.col(resp.time_code).transpose();
        row += complex_gaussian(1, time_codes.rows(), noise_var, rng);
        observed.push_back(std::move(row));
    }
    return observed;
}

} // namespace ramimo
