#include <doctest.h>

#include <ios>

#include "ramimo/system_config.hpp"

using ramimo::ConfigError;
using ramimo::SystemConfig;

TEST_CASE("defaults are a valid deployment") {
    SystemConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.sample_period_s() == doctest::Approx(50e-9));
    // Farthest UE sits at the hexagon vertex, 250 m: 2*250 / (3e8 * 50ns).
    CHECK(cfg.max_timing_error() == doctest::Approx(100.0 / 3.0));
}

TEST_CASE("noise variance follows the SNR knob") {
    SystemConfig cfg;
    cfg.snr_db = 10.0;
    CHECK(cfg.noise_variance() == doctest::Approx(0.1));
    cfg.snr_db = 0.0;
    CHECK(cfg.noise_variance() == doctest::Approx(1.0));
    cfg.snr_db = std::numeric_limits<double>::infinity();
    CHECK(cfg.noise_variance() == 0.0);
}

TEST_CASE("range checks reject bad fields") {
    SystemConfig cfg;
    cfg.n_subcarriers = 1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.max_rounds = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.min_distance_m = 300.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.m_antennas = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("timing span must fit inside one code spacing") {
    SystemConfig cfg;
    // Blowing up the cell pushes theta_max/n_fft past 1/N.
    cfg.cell_radius_m = 50000.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    // Shrinking the FFT does the same at the default radius.
    cfg = {};
    cfg.n_fft = 64;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("config text round trip") {
    const char* text =
        "# deployment under test\n"
        "m_antennas = 128\n"
        "n_subcarriers = 12\n"
        "snr_db = inf\n"
        "seed = 42\n"
        "\n";
    const SystemConfig cfg = SystemConfig::from_text(text);
    CHECK(cfg.m_antennas == 128);
    CHECK(cfg.n_subcarriers == 12);
    CHECK(cfg.noise_variance() == 0.0);
    CHECK(cfg.seed == 42);
    // Unspecified keys keep their defaults.
    CHECK(cfg.q_symbols == 2);
}

TEST_CASE("unknown keys and malformed lines are errors") {
    CHECK_THROWS_AS(SystemConfig::from_text("m_antennas = 10\nbogus_key = 3\n"), ConfigError);
    CHECK_THROWS_AS(SystemConfig::from_text("m_antennas 10\n"), ConfigError);
    CHECK_THROWS_AS(SystemConfig::from_text("m_antennas = ten\n"), ConfigError);
    CHECK_THROWS_AS(SystemConfig::from_text("snr_db = 10dB\n"), ConfigError);
}

TEST_CASE("missing config file reports an io failure") {
    CHECK_THROWS_AS(SystemConfig::from_file("/nonexistent/path.cfg"),
                    std::ios_base::failure);
}
