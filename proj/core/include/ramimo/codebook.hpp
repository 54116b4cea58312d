#pragma once

#include <Eigen/Dense>
#include <complex>

namespace ramimo {

/// Frequency code f_l over N subcarriers: [f_l]_n = exp(j 2 pi n l / N).
/// Unit-modulus entries, squared norm N. Throws std::out_of_range for bad l.
Eigen::VectorXcd frequency_code(int l, int n_subcarriers);

/// Orthogonal time codebook: column i is the size-Q DFT vector
/// [t_i]_q = exp(j 2 pi q i / Q). Columns satisfy t_a^H t_b = Q delta_ab.
Eigen::MatrixXcd time_codebook(int q_symbols);

/// Steering vector of an effective offset: [c(eps)]_p = exp(j 2 pi p eps),
/// p = 0..N-1. frequency_code(l, N) == steering(l/N, N) by construction.
Eigen::VectorXcd steering(double offset, int n_subcarriers);

/// Distance between offsets on the unit interval treated as a circle.
double circular_distance(double a, double b);

} // namespace ramimo
