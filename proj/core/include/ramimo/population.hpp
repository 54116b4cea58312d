#pragma once

#include <optional>
#include <random>
#include <vector>

#include "ramimo/system_config.hpp"

namespace ramimo {

/// One contending UE. Geometry, power control and code selection are drawn at
/// build time; detection state is filled in by the protocol as rounds run.
struct UeRecord {
    int index = 0;                ///< stable id within the trial population
    double distance_m = 0.0;      ///< BS-UE distance
    double beta = 1.0;            ///< large-scale fading D^-alpha
    double rho = 1.0;             ///< uplink power, inverts beta exactly
    double theta = 0.0;           ///< round-trip timing error, samples
    int freq_code = 0;            ///< selected frequency code l in [0, N)
    int time_code = 0;            ///< selected time code i in [0, Q)
    double offset = 0.0;          ///< effective offset eps in [0, 1)
    bool active = true;
    std::optional<int> detected_round;      ///< 1-based round of detection
    std::optional<double> recovered_theta;  ///< timing delivered to the UE
};

using Population = std::vector<UeRecord>;

/// Effective pilot offset eps = (l/N - theta/n_fft) mod 1, in [0, 1).
/// The frequency code and the physical delay collapse into this single
/// rotation; everything downstream of the air interface sees only eps.
double effective_offset(int freq_code, int n_subcarriers, double theta, int n_fft);

/// Round-trip timing error in samples for a UE at `distance_m`.
double timing_error_samples(double distance_m, double sample_period_s);

/// Assigns (l, i) to the record and refreshes its effective offset.
void assign_codes(UeRecord& ue, int freq_code, int time_code, const SystemConfig& cfg);

/// Draws cfg.n_active UEs: positions uniform over the hexagonal cell minus the
/// exclusion disk (rejection sampling from the circumscribed disk), power
/// control rho*beta = 1, codes uniform over the N*Q grid.
Population build_population(const SystemConfig& cfg, std::mt19937_64& rng);

} // namespace ramimo
