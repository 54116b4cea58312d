#include "ramimo/codebook.hpp"

#include <cmath>
#include <stdexcept>

namespace ramimo {

using namespace std::complex_literals;

Eigen::VectorXcd steering(double offset, int n_subcarriers) {
    if (n_subcarriers < 1) throw std::out_of_range("steering: n_subcarriers < 1");
    Eigen::VectorXcd c(n_subcarriers);
    for (int p = 0; p < n_subcarriers; ++p)
        c(p) = std::exp(2.0i * M_PI * static_cast<double>(p) * offset);
    return c;
}

Eigen::VectorXcd frequency_code(int l, int n_subcarriers) {
    if (l < 0 || l >= n_subcarriers)
        throw std::out_of_range("frequency_code: index outside [0, N)");
    return steering(static_cast<double>(l) / n_subcarriers, n_subcarriers);
}

Eigen::MatrixXcd time_codebook(int q_symbols) {
    if (q_symbols < 1) throw std::out_of_range("time_codebook: q_symbols < 1");
    Eigen::MatrixXcd t(q_symbols, q_symbols);
    for (int i = 0; i < q_symbols; ++i)
        for (int q = 0; q < q_symbols; ++q)
            t(q, i) = std::exp(2.0i * M_PI * static_cast<double>(q) *
                               static_cast<double>(i) / static_cast<double>(q_symbols));
    return t;
}

double circular_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), 1.0);
    return std::min(d, 1.0 - d);
}

} // namespace ramimo
