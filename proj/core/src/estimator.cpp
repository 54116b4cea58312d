#include "ramimo/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "ramimo/codebook.hpp"

namespace ramimo {

using namespace std::complex_literals;

namespace {

double arg_to_offset(std::complex<double> z) {
    double e = std::arg(z) / (2.0 * M_PI);
    if (e < 0.0) e += 1.0;
    if (e >= 1.0) e -= 1.0;
    return e;
}

} // namespace

Eigen::MatrixXcd correlate_time(const PilotBlock& block, const Eigen::VectorXcd& time_code) {
    if (block.y.empty()) throw std::invalid_argument("correlate_time: empty block");
    const int q = static_cast<int>(time_code.size());
    if (block.y.front().cols() != q)
        throw std::invalid_argument("correlate_time: code length != symbol count");
    const auto m_antennas = static_cast<Eigen::Index>(block.y.size());
    const auto n = block.y.front().rows();

    // Y_m t* / Q: the matched code's signal passes with unit gain, the noise
    // comes out with variance sigma^2 / Q per element.
    Eigen::MatrixXcd z(m_antennas, n);
    const Eigen::VectorXcd tc = time_code.conjugate() / static_cast<double>(q);
    for (Eigen::Index m = 0; m < m_antennas; ++m)
        z.row(m) = (block.y[static_cast<std::size_t>(m)] * tc).transpose();
    return z;
}

Eigen::VectorXcd aggregate_reference(const Eigen::MatrixXcd& z) {
    if (z.rows() < 1) throw std::invalid_argument("aggregate_reference: no antennas");
    return (z.col(0).adjoint() * z).transpose() / static_cast<double>(z.rows());
}

CountEstimate estimate_count(const Eigen::VectorXcd& z_c, double noise_var, int ceiling) {
    const long raw = std::lround(z_c(0).real() - noise_var);
    CountEstimate est;
    est.count = static_cast<int>(std::clamp<long>(raw, 0, ceiling));
    est.capacity_exceeded = raw > ceiling;
    return est;
}

Eigen::MatrixXcd sample_covariance(const Eigen::MatrixXcd& z) {
    if (z.rows() < 1) throw std::invalid_argument("sample_covariance: no antennas");
    // (1/M) sum_m z_m z_m^H with z_m the m-th row as a column vector.
    return (z.transpose() * z.conjugate()) / static_cast<double>(z.rows());
}

std::vector<double> subspace_offsets(const Eigen::MatrixXcd& r, int d) {
    const int n = static_cast<int>(r.rows());
    if (d < 1 || d > n - 1)
        throw std::invalid_argument("subspace_offsets: need 1 <= d <= N-1");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(r);
    if (eig.info() != Eigen::Success)
        throw EstimationFailure("subspace_offsets: eigendecomposition failed");
    // Eigenvalues come out ascending; the signal subspace is the last d columns.
    const Eigen::MatrixXcd v = eig.eigenvectors().rightCols(d);
    const Eigen::MatrixXcd v1 = v.topRows(n - 1);
    const Eigen::MatrixXcd v2 = v.bottomRows(n - 1);

    const Eigen::MatrixXcd gram = v1.adjoint() * v1;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(gram);
    const auto& sv = svd.singularValues();
    if (sv(0) <= 0.0 || sv(sv.size() - 1) / sv(0) < 1e-13)
        throw EstimationFailure("subspace_offsets: rank-deficient shift pencil");

    const Eigen::MatrixXcd psi = gram.ldlt().solve(v1.adjoint() * v2);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(psi, /*computeEigenvectors=*/false);
    if (ces.info() != Eigen::Success)
        throw EstimationFailure("subspace_offsets: rotation eigenvalues failed");

    std::vector<double> offsets(static_cast<std::size_t>(d));
    for (int s = 0; s < d; ++s)
        offsets[static_cast<std::size_t>(s)] = arg_to_offset(ces.eigenvalues()(s));
    std::sort(offsets.begin(), offsets.end());
    return offsets;
}

Eigen::VectorXcd residual_power_sums(const Eigen::VectorXcd& z_c,
                                     std::span<const double> known_offsets,
                                     double noise_var) {
    const auto n = z_c.size();
    Eigen::VectorXcd p = z_c;
    p(0) -= noise_var;
    for (const double eps : known_offsets)
        for (Eigen::Index i = 0; i < n; ++i)
            p(i) -= std::exp(2.0i * M_PI * static_cast<double>(i) * eps);
    return p;
}

PowerSumRoots solve_power_sums(const Eigen::VectorXcd& p, int remaining,
                               double unit_circle_tol) {
    if (remaining < 1 || remaining >= p.size())
        throw std::invalid_argument("solve_power_sums: need 1 <= remaining <= p.size()-1");
    const int r = remaining;
    using cd = std::complex<double>;

    // Newton's identities: k e_k = sum_{i=1..k} (-1)^(i-1) e_{k-i} p_i.
    std::vector<cd> e(static_cast<std::size_t>(r) + 1, cd(0.0));
    e[0] = 1.0;
    for (int k = 1; k <= r; ++k) {
        cd acc = 0.0;
        double sign = 1.0;
        for (int i = 1; i <= k; ++i) {
            acc += sign * e[static_cast<std::size_t>(k - i)] * p(i);
            sign = -sign;
        }
        e[static_cast<std::size_t>(k)] = acc / static_cast<double>(k);
    }

    PowerSumRoots out;
    if (r == 1) {
        // Single root, no companion matrix needed: x = e_1.
        const cd x = e[1];
        if (std::abs(std::abs(x) - 1.0) > unit_circle_tol)
            out.rejected = 1;
        else
            out.offsets.push_back(arg_to_offset(x));
        return out;
    }

    // Roots of sum_k (-1)^k e_k x^(r-k): the companion matrix carries ones on
    // the subdiagonal and -coefficients in the last column, so entry
    // (r-k, r-1) is -(-1)^k e_k.
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(r, r);
    companion.diagonal(-1).setOnes();
    for (int k = 1; k <= r; ++k) {
        const double s = (k % 2 == 0) ? 1.0 : -1.0;
        companion(r - k, r - 1) = -s * e[static_cast<std::size_t>(k)];
    }

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(companion, false);
    if (ces.info() != Eigen::Success) {
        out.rejected = r;
        return out;
    }
    for (int s2 = 0; s2 < r; ++s2) {
        const cd x = ces.eigenvalues()(s2);
        if (std::abs(std::abs(x) - 1.0) > unit_circle_tol)
            ++out.rejected;
        else
            out.offsets.push_back(arg_to_offset(x)); // projection onto the circle
    }
    std::sort(out.offsets.begin(), out.offsets.end());
    return out;
}

Eigen::VectorXcd ls_channel(const Eigen::MatrixXcd& z, double offset) {
    const int n = static_cast<int>(z.cols());
    return z * steering(offset, n).conjugate() / static_cast<double>(n);
}

std::vector<EstimationReport> estimate_all(const PilotBlock& block,
                                           const Eigen::MatrixXcd& time_codes,
                                           const SystemConfig& cfg,
                                           EstimatorMode mode) {
    const int n = cfg.n_subcarriers;
    const int q = static_cast<int>(time_codes.cols());
    const int code_capacity = 2 * (n - 1);
    const double post_corr_noise = block.noise_var / q;

    std::vector<EstimationReport> reports(static_cast<std::size_t>(q));
    for (int i = 0; i < q; ++i) {
        auto& rep = reports[static_cast<std::size_t>(i)];
        const Eigen::MatrixXcd z = correlate_time(block, time_codes.col(i));
        const Eigen::VectorXcd z_c = aggregate_reference(z);

        const CountEstimate count = estimate_count(z_c, post_corr_noise, code_capacity);
        rep.est_count = count.count;
        rep.capacity_exceeded = count.capacity_exceeded;
        if (rep.est_count == 0) continue;

        const int d = std::min(n - 1, rep.est_count);
        try {
            rep.est_offsets = subspace_offsets(sample_covariance(z), d);
        } catch (const EstimationFailure&) {
            rep.failed = true;
            rep.est_offsets.clear();
            continue;
        }

        if (mode == EstimatorMode::proposed && rep.est_count > d) {
            const Eigen::VectorXcd p =
                residual_power_sums(z_c, rep.est_offsets, post_corr_noise);
            const PowerSumRoots roots =
                solve_power_sums(p, rep.est_count - d, cfg.root_unit_circle_tol);
            rep.est_offsets.insert(rep.est_offsets.end(), roots.offsets.begin(),
                                   roots.offsets.end());
        } else if (mode == EstimatorMode::baseline && rep.est_count > n - 1) {
            // ESPRIT-only processing cannot address more sources than the
            // subspace holds; anything beyond d is lost this round.
            rep.capacity_exceeded = true;
        }

        rep.est_channels.reserve(rep.est_offsets.size());
        for (const double eps : rep.est_offsets)
            rep.est_channels.push_back(ls_channel(z, eps));
    }
    return reports;
}

} // namespace ramimo
