#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ramimo {

/// Raised for invalid parameter values, malformed config text and unknown keys.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Speed of light, m/s. Round-trip delay of an echo at distance D is 2D/c.
inline constexpr double kSpeedOfLight = 3.0e8;

/// Full parameter set for one simulated cell.
///
/// Defaults reproduce the reference deployment: a hexagonal cell of
/// circumradius 250 m, 20 MHz bandwidth, 1024-point FFT, two time codes and
/// eight pilot subcarriers. All fields are plain data; call validate() after
/// mutating.
struct SystemConfig {
    int m_antennas = 200;           ///< BS antenna count M
    int n_subcarriers = 8;          ///< pilot subcarriers N (>= 2)
    int q_symbols = 2;              ///< pilot symbols / time codes Q
    int n_fft = 1024;               ///< FFT length of the uplink frame
    double bandwidth_hz = 20e6;     ///< system bandwidth, fixes the sample period
    double cell_radius_m = 250.0;   ///< hexagon circumradius
    double min_distance_m = 25.0;   ///< UE exclusion disk around the BS
    int n_active = 6;               ///< number of UEs contending in this attempt
    double snr_db = 10.0;           ///< uplink SNR under unit receive power (inf = noiseless)
    double pathloss_exponent = 3.8; ///< large-scale fading beta = D^-alpha
    double detect_match_tol = 5e-4; ///< offset association tolerance (limit-mode detection)
    double root_unit_circle_tol = 0.35; ///< |.|-band around 1 accepted for recovered roots
    int max_rounds = 2;             ///< access attempt rounds (>= 1)
    std::uint64_t seed = 1;         ///< base RNG seed

    double sample_period_s() const { return 1.0 / bandwidth_hz; }

    /// Noise variance per complex sample, 10^(-snr_db/10). snr_db = inf gives 0.
    double noise_variance() const { return std::pow(10.0, -snr_db / 10.0); }

    /// Worst-case timing error in samples, for a UE at the cell vertex.
    double max_timing_error() const {
        return 2.0 * cell_radius_m / (kSpeedOfLight * sample_period_s());
    }

    /// Throws ConfigError unless every field is in range and the cell geometry
    /// keeps timing errors inside the unambiguous window (theta_max/n_fft < 1/N).
    void validate() const;

    /// Parses flat "key=value" text, one key per line. Blank lines and lines
    /// starting with '#' are ignored; unknown keys are an error.
    static SystemConfig from_text(std::string_view text);

    /// from_text() on the contents of `path`. Missing/unreadable file throws
    /// std::ios_base::failure, parse problems throw ConfigError.
    static SystemConfig from_file(const std::string& path);
};

} // namespace ramimo
