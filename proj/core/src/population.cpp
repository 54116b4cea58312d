#include "ramimo/population.hpp"

#include <cmath>

namespace ramimo {

double effective_offset(int freq_code, int n_subcarriers, double theta, int n_fft) {
    double e = static_cast<double>(freq_code) / n_subcarriers - theta / n_fft;
    e = std::fmod(e, 1.0);
    if (e < 0.0) e += 1.0;
    return e;
}

double timing_error_samples(double distance_m, double sample_period_s) {
    return 2.0 * distance_m / (kSpeedOfLight * sample_period_s);
}

void assign_codes(UeRecord& ue, int freq_code, int time_code, const SystemConfig& cfg) {
    ue.freq_code = freq_code;
    ue.time_code = time_code;
    ue.offset = effective_offset(freq_code, cfg.n_subcarriers, ue.theta, cfg.n_fft);
}

namespace {

// Regular hexagon with circumradius r, one vertex on the +x axis.
bool inside_hexagon(double x, double y, double r) {
    const double apothem = r * std::sqrt(3.0) / 2.0;
    return std::abs(y) <= apothem &&
           std::sqrt(3.0) * std::abs(x) + std::abs(y) <= 2.0 * apothem;
}

} // namespace

Population build_population(const SystemConfig& cfg, std::mt19937_64& rng) {
    cfg.validate();
    Population pop;
    pop.reserve(static_cast<std::size_t>(cfg.n_active));

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> pick_l(0, cfg.n_subcarriers - 1);
    std::uniform_int_distribution<int> pick_i(0, cfg.q_symbols - 1);

    for (int k = 0; k < cfg.n_active; ++k) {
        // Uniform over the hexagonal cell minus the exclusion disk, by
        // rejection from the circumscribed disk.
        double x = 0.0, y = 0.0, d = 0.0;
        do {
            const double u = unit(rng);
            const double phi = 2.0 * M_PI * unit(rng);
            d = cfg.cell_radius_m * std::sqrt(u);
            x = d * std::cos(phi);
            y = d * std::sin(phi);
        } while (d < cfg.min_distance_m || !inside_hexagon(x, y, cfg.cell_radius_m));

        UeRecord ue;
        ue.index = k;
        ue.distance_m = d;
        ue.beta = std::pow(d, -cfg.pathloss_exponent);
        ue.rho = 1.0 / ue.beta; // exact uplink power control
        ue.theta = timing_error_samples(d, cfg.sample_period_s());
        ue.active = true;
        assign_codes(ue, pick_l(rng), pick_i(rng), cfg);
        pop.push_back(ue);
    }
    return pop;
}

} // namespace ramimo
