#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>

namespace ramimo {

/// Engine used everywhere. Seeded through seed_seq so that consecutive trial
/// seeds (base, base+1, ...) give decorrelated streams.
inline std::mt19937_64 make_rng(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      0x9e3779b9u, 0x85ebca6bu};
    return std::mt19937_64(seq);
}

/// Fills a matrix with iid CN(0, var) entries. var == 0 yields zeros without
/// touching the engine, so a noiseless run consumes no draws.
inline Eigen::MatrixXcd complex_gaussian(Eigen::Index rows, Eigen::Index cols,
                                         double var, std::mt19937_64& rng) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows, cols);
    if (var <= 0.0) return m;
    std::normal_distribution<double> n(0.0, std::sqrt(var / 2.0));
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r)
            m(r, c) = {n(rng), n(rng)};
    return m;
}

} // namespace ramimo
