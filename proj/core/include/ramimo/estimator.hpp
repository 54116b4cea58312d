#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "ramimo/airlink.hpp"
#include "ramimo/system_config.hpp"

namespace ramimo {

/// Raised when the subspace step degenerates (rank-deficient pencil). Caught
/// inside estimate_all and converted into a per-code failure flag.
class EstimationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Estimator variants. `proposed` closes the gap between the subspace capacity
/// N-1 and the code capacity 2(N-1) through the residual power-sum system;
/// `baseline` stops at the subspace estimates.
enum class EstimatorMode { proposed, baseline };

/// Per-time-code result of the BS pilot processing.
struct EstimationReport {
    int est_count = 0;                          ///< estimated UEs on this code
    std::vector<double> est_offsets;            ///< subspace part, then power-sum part
    std::vector<Eigen::VectorXcd> est_channels; ///< LS channel per offset, length M each
    bool capacity_exceeded = false;             ///< raw count above this mode's cap
    bool failed = false;                        ///< subspace step degenerated
};

/// Correlates the block with one time code: row m is Y_m t* / Q. For the
/// matched code the signal part is exactly sum_u g_u^m c(eps_u); the dispreading
/// leaves per-element noise variance sigma^2 / Q.
Eigen::MatrixXcd correlate_time(const PilotBlock& block, const Eigen::VectorXcd& time_code);

/// Reference cross-correlation z_c = (first column of Z)^H Z / M. Under
/// favorable propagation element n converges to sum_u exp(j 2 pi n eps_u),
/// plus the noise self-term at element 0.
Eigen::VectorXcd aggregate_reference(const Eigen::MatrixXcd& z);

struct CountEstimate {
    int count = 0;                  ///< clamped to `ceiling`
    bool capacity_exceeded = false; ///< raw estimate was above `ceiling`
};

/// Reads the UE count off element 0 of z_c after removing the known noise
/// bias: max(0, round(Re z_c[0] - noise_var)), clamped to `ceiling`.
CountEstimate estimate_count(const Eigen::VectorXcd& z_c, double noise_var, int ceiling);

/// Sample covariance (1/M) sum_m z_m z_m^H of the correlated rows.
Eigen::MatrixXcd sample_covariance(const Eigen::MatrixXcd& z);

/// Subspace offset estimation. Takes the d principal eigenvectors V of R
/// (ties broken by Eigen's deterministic ascending order), splits them into
/// the first and last N-1 rows and reads the offsets from the eigenvalues of
/// (V1^H V1)^-1 V1^H V2. Requires 1 <= d <= N-1; throws EstimationFailure if
/// the pencil is numerically singular. Result is sorted ascending.
std::vector<double> subspace_offsets(const Eigen::MatrixXcd& r, int d);

/// Power sums of the offsets the subspace step did not deliver:
///   p[n] = z_c[n] - sum_s exp(j 2 pi n eps_s),  n = 0..N-1,
/// with the noise bias removed from element 0. If exactly the remaining
/// sources are left in the residual, p[0] is their count and p[n] their n-th
/// power sum.
Eigen::VectorXcd residual_power_sums(const Eigen::VectorXcd& z_c,
                                     std::span<const double> known_offsets,
                                     double noise_var);

struct PowerSumRoots {
    std::vector<double> offsets; ///< accepted roots, as offsets in [0,1), ascending
    int rejected = 0;            ///< roots outside the unit-circle band
};

/// Recovers `remaining` offsets from their power sums p[1..remaining] via
/// Newton's identities and the eigenvalues of the companion matrix. Roots
/// farther than `unit_circle_tol` from the unit circle are dropped; survivors
/// are projected onto it. Requires 1 <= remaining <= p.size() - 1.
PowerSumRoots solve_power_sums(const Eigen::VectorXcd& p, int remaining,
                               double unit_circle_tol);

/// Least-squares channel for one offset: element m is c(eps)^H z_m / N.
Eigen::VectorXcd ls_channel(const Eigen::MatrixXcd& z, double offset);

/// Full BS pilot processing, one report per time code. Per-code failures are
/// flagged, never propagated, so one degenerate code cannot sink the others.
std::vector<EstimationReport> estimate_all(const PilotBlock& block,
                                           const Eigen::MatrixXcd& time_codes,
                                           const SystemConfig& cfg,
                                           EstimatorMode mode);

} // namespace ramimo
