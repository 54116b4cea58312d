#include "ramimo/trial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ramimo/airlink.hpp"
#include "ramimo/codebook.hpp"
#include "ramimo/metrics.hpp"
#include "ramimo/rng.hpp"
#include "ramimo/ue_protocol.hpp"

namespace ramimo {

using namespace std::complex_literals;

TrialMode trial_mode_from_string(const std::string& s) {
    if (s == "proposed") return TrialMode::proposed;
    if (s == "baseline") return TrialMode::baseline;
    if (s == "oracle") return TrialMode::oracle;
    throw ConfigError("unknown mode '" + s + "' (expected proposed|baseline|oracle)");
}

std::string to_string(TrialMode mode) {
    switch (mode) {
    case TrialMode::proposed: return "proposed";
    case TrialMode::baseline: return "baseline";
    case TrialMode::oracle: return "oracle";
    }
    return "?";
}

namespace {

std::vector<int> contenders(const Population& pop) {
    std::vector<int> idx;
    for (const auto& ue : pop)
        if (ue.active && !ue.detected_round) idx.push_back(ue.index);
    return idx;
}

double circular_gap(double a, double b) {
    const double d = std::abs(a - b);
    return std::min(d, 1.0 - d);
}

// Recovered offsets closer than twice the timing-match tolerance could both
// belong to a single UE, so the broadcaster must not pretend to tell them
// apart. Offsets are chained into groups at that resolution; the chain runs
// over the circle, so it may wrap around 1 -> 0. Returned ids are dense and
// aligned with the input order (the report lists the subspace offsets first
// and the power-sum offsets after them, so the input is not globally sorted).
std::vector<int> resolution_groups(const std::vector<double>& offsets, double tol) {
    const std::size_t r = offsets.size();
    std::vector<std::size_t> order(r);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return offsets[a] < offsets[b]; });

    std::vector<int> group(r, 0);
    int next = 0;
    for (std::size_t s = 1; s < r; ++s) {
        if (offsets[order[s]] - offsets[order[s - 1]] >= 2.0 * tol) ++next;
        group[order[s]] = next;
    }
    if (r > 1 && next > 0 &&
        circular_gap(offsets[order.front()], offsets[order.back()]) < 2.0 * tol)
        for (std::size_t s = 0; s < r; ++s)
            if (group[s] == next) group[s] = 0;
    return group;
}

// Broadcast weights for one code's responses. The per-offset channel
// estimates leak into each other whenever recovered offsets are close
// (steering vectors are only orthogonal at multiples of 1/N), and a leaky
// response rings at several UEs at once, which the rounding rule cannot
// survive. Solving the estimates against the recovered steering Gram
// zero-forces that leakage, so each response addresses exactly one
// *resolvable* offset. Offsets inside one resolution group share a single
// group beam on purpose: every UE in the group then sees all of the group's
// responses ring together, reports a collision, and retries, instead of
// being handed timing that might belong to its neighbour.
std::vector<Eigen::VectorXcd> decorrelated_weights(const EstimationReport& rep,
                                                   int n_subcarriers,
                                                   double match_tol) {
    const std::size_t r = rep.est_offsets.size();
    if (r <= 1) return rep.est_channels;

    const std::vector<int> group = resolution_groups(rep.est_offsets, match_tol);
    const int n_groups = *std::max_element(group.begin(), group.end()) + 1;

    // Group representatives: circular-mean offset, mean channel estimate.
    std::vector<double> rep_offset(static_cast<std::size_t>(n_groups), 0.0);
    std::vector<int> members(static_cast<std::size_t>(n_groups), 0);
    std::vector<double> first(static_cast<std::size_t>(n_groups),
                              std::numeric_limits<double>::quiet_NaN());
    Eigen::MatrixXcd rep_est = Eigen::MatrixXcd::Zero(
        rep.est_channels.front().size(), n_groups);
    for (std::size_t s = 0; s < r; ++s) {
        const auto g = static_cast<std::size_t>(group[s]);
        if (members[g] == 0) first[g] = rep.est_offsets[s];
        double delta = rep.est_offsets[s] - first[g];
        delta -= std::round(delta); // wrap groups straddle 1 -> 0
        rep_offset[g] += delta;
        rep_est.col(group[s]) += rep.est_channels[s];
        ++members[g];
    }
    for (int g = 0; g < n_groups; ++g) {
        const auto gs = static_cast<std::size_t>(g);
        double mean = first[gs] + rep_offset[gs] / members[gs];
        mean -= std::floor(mean);
        rep_offset[gs] = mean;
        rep_est.col(g) /= members[gs];
    }

    Eigen::MatrixXcd c(n_subcarriers, n_groups);
    for (int g = 0; g < n_groups; ++g)
        c.col(g) = steering(rep_offset[static_cast<std::size_t>(g)], n_subcarriers);
    Eigen::MatrixXcd gram = c.transpose() * c.conjugate(); // Hermitian PSD
    gram.diagonal().array() += 1e-12 * n_subcarriers * static_cast<double>(n_groups);

    // W = N * Est * gram^-1, using gram's Hermitian structure.
    const Eigen::MatrixXcd w =
        static_cast<double>(n_subcarriers) *
        gram.ldlt().solve(rep_est.adjoint()).adjoint();

    std::vector<Eigen::VectorXcd> weights(r);
    for (std::size_t s = 0; s < r; ++s)
        weights[s] = w.col(group[s]);
    return weights;
}

void finite_rounds(const SystemConfig& cfg, Population& pop, std::mt19937_64& rng,
                   EstimatorMode est_mode) {
    const Eigen::MatrixXcd time_codes = time_codebook(cfg.q_symbols);
    // The reselection round is the retry mechanism of the full scheme; the
    // subspace-only baseline is one-shot, which is exactly what caps its
    // per-code deliveries at the N-1 responses it can broadcast.
    const int rounds = est_mode == EstimatorMode::baseline ? 1 : cfg.max_rounds;
    // A UE leaves the pool once its grant went through. Failures of every
    // kind -- no response singled out, several responses ringing at once, or
    // losing contention on a grant that two UEs both claimed -- retry.
    std::vector<char> settled(pop.size(), 0);

    for (int round = 1; round <= rounds; ++round) {
        std::vector<int> idx;
        for (const auto& ue : pop)
            if (ue.active && !settled[static_cast<std::size_t>(ue.index)])
                idx.push_back(ue.index);
        if (idx.empty()) break;
        if (round > 1)
            for (int k : idx) reselect_codes(pop[static_cast<std::size_t>(k)], cfg, rng);

        Population sub;
        sub.reserve(idx.size());
        for (int k : idx) sub.push_back(pop[static_cast<std::size_t>(k)]);

        const ChannelRealization ch = sample_channel(sub, cfg.m_antennas, rng);
        const PilotBlock block =
            synthesize_uplink(sub, ch, cfg.n_subcarriers, time_codes, cfg.snr_db, rng);
        const auto reports = estimate_all(block, time_codes, cfg, est_mode);

        std::vector<std::vector<PrecodedResponse>> responses(
            static_cast<std::size_t>(cfg.q_symbols));
        for (int i = 0; i < cfg.q_symbols; ++i) {
            const auto& rep = reports[static_cast<std::size_t>(i)];
            const auto weights =
                decorrelated_weights(rep, cfg.n_subcarriers, cfg.detect_match_tol);
            for (std::size_t s = 0; s < rep.est_offsets.size(); ++s)
                responses[static_cast<std::size_t>(i)].push_back(
                    {weights[s], i, rep.est_offsets[s]});
        }

        // Each response is a single uplink grant. Every UE whose correlation
        // singles out that response claims it; the claim lists decide below
        // which grants actually deliver a message.
        std::vector<std::vector<std::vector<int>>> claimants(
            static_cast<std::size_t>(cfg.q_symbols));
        for (int i = 0; i < cfg.q_symbols; ++i)
            claimants[static_cast<std::size_t>(i)].resize(
                responses[static_cast<std::size_t>(i)].size());

        for (std::size_t j = 0; j < sub.size(); ++j) {
            auto& ue = pop[static_cast<std::size_t>(idx[j])];
            const auto& own = responses[static_cast<std::size_t>(ue.time_code)];
            const auto observed = synthesize_downlink(
                ue, ch.g.col(static_cast<Eigen::Index>(j)), own, time_codes,
                cfg.snr_db, rng);
            std::vector<std::complex<double>> rs(own.size());
            for (std::size_t s = 0; s < own.size(); ++s)
                rs[s] = ue_correlate(observed[s], time_codes.col(ue.time_code),
                                     ue.beta, cfg.m_antennas);
            const DetectionVerdict verdict = detect(rs);
            if (verdict.detected) {
                settled[static_cast<std::size_t>(ue.index)] = 1;
                claimants[static_cast<std::size_t>(ue.time_code)]
                         [static_cast<std::size_t>(*verdict.matched_response)]
                             .push_back(ue.index);
            }
        }

        // A grant claimed by several UEs serves none of them: their uplink
        // messages collide on the granted resource, contention resolution
        // tells them so, and they go back into the pool for the next round
        // exactly like UEs whose correlation never singled out a response.
        for (int i = 0; i < cfg.q_symbols; ++i) {
            const auto& own = responses[static_cast<std::size_t>(i)];
            for (std::size_t s = 0; s < own.size(); ++s) {
                const auto& list = claimants[static_cast<std::size_t>(i)][s];
                if (list.size() == 1) {
                    auto& ue = pop[static_cast<std::size_t>(list.front())];
                    ue.detected_round = round;
                    ue.recovered_theta = recover_timing(
                        ue.freq_code, cfg.n_subcarriers, own[s].offset, cfg.n_fft);
                } else {
                    for (int k : list) settled[static_cast<std::size_t>(k)] = 0;
                }
            }
        }
    }
}

void oracle_rounds(const SystemConfig& cfg, Population& pop, std::mt19937_64& rng,
                   EstimatorMode est_mode) {
    const int n = cfg.n_subcarriers;
    const int code_capacity = 2 * (n - 1);
    const double post_corr_noise = cfg.noise_variance() / cfg.q_symbols;

    for (int round = 1; round <= cfg.max_rounds; ++round) {
        const std::vector<int> idx = contenders(pop);
        if (idx.empty()) break;
        if (round > 1)
            for (int k : idx) reselect_codes(pop[static_cast<std::size_t>(k)], cfg, rng);

        for (int i = 0; i < cfg.q_symbols; ++i) {
            std::vector<int> members;
            for (int k : idx)
                if (pop[static_cast<std::size_t>(k)].time_code == i) members.push_back(k);
            if (members.empty()) continue;

            // Exact limit statistics for this code: reference vector without
            // noise bias, covariance with the residual noise floor.
            Eigen::VectorXcd z_c = Eigen::VectorXcd::Zero(n);
            Eigen::MatrixXcd r = post_corr_noise * Eigen::MatrixXcd::Identity(n, n);
            for (int k : members) {
                const Eigen::VectorXcd c = steering(pop[static_cast<std::size_t>(k)].offset, n);
                z_c += c;
                r += c * c.adjoint();
            }

            const int count = std::min(static_cast<int>(members.size()), code_capacity);
            const int d = std::min(n - 1, count);
            std::vector<double> offsets;
            try {
                offsets = subspace_offsets(r, d);
            } catch (const EstimationFailure&) {
                continue;
            }
            if (est_mode == EstimatorMode::proposed && count > d) {
                const Eigen::VectorXcd p = residual_power_sums(z_c, offsets, 0.0);
                const PowerSumRoots roots =
                    solve_power_sums(p, count - d, cfg.root_unit_circle_tol);
                offsets.insert(offsets.end(), roots.offsets.begin(), roots.offsets.end());
            }

            // Detection in the limit: downlink correlations concentrate, so a
            // UE succeeds exactly when one recovered offset points at it and
            // at nobody else on the same code.
            for (const int k : members) {
                auto& ue = pop[static_cast<std::size_t>(k)];
                int match = -1;
                int matches = 0;
                for (std::size_t s = 0; s < offsets.size(); ++s) {
                    if (circular_distance(offsets[s], ue.offset) <= cfg.detect_match_tol) {
                        ++matches;
                        match = static_cast<int>(s);
                    }
                }
                if (matches != 1) continue;
                bool shared = false;
                for (const int v : members) {
                    if (v == k) continue;
                    if (circular_distance(offsets[static_cast<std::size_t>(match)],
                                          pop[static_cast<std::size_t>(v)].offset) <=
                        cfg.detect_match_tol) {
                        shared = true;
                        break;
                    }
                }
                if (shared) continue;
                ue.detected_round = round;
                ue.recovered_theta =
                    recover_timing(ue.freq_code, n,
                                   offsets[static_cast<std::size_t>(match)], cfg.n_fft);
            }
        }
    }
}

TrialOutcome finalize(const Population& pop, std::uint64_t seed,
                      const std::vector<double>& theta_truth,
                      const std::vector<double>& offset_truth) {
    TrialOutcome out;
    out.seed = seed;
    out.ues.reserve(pop.size());
    for (std::size_t k = 0; k < pop.size(); ++k) {
        const auto& ue = pop[k];
        UeOutcome u;
        u.ue_index = ue.index;
        u.theta = theta_truth[k];
        u.offset = offset_truth[k];
        u.detected = ue.detected_round.has_value();
        if (u.detected) {
            u.round = *ue.detected_round;
            u.theta_hat = *ue.recovered_theta;
            const double err = u.theta_hat - u.theta;
            u.sq_error_theta = err * err;
            ++out.detected_count;
        }
        out.ues.push_back(u);
    }
    return out;
}

TrialOutcome run_rounds(const SystemConfig& cfg, Population pop, std::uint64_t seed,
                        std::mt19937_64& rng, TrialMode mode) {
    std::vector<double> theta_truth, offset_truth;
    theta_truth.reserve(pop.size());
    offset_truth.reserve(pop.size());
    for (const auto& ue : pop) {
        theta_truth.push_back(ue.theta);
        offset_truth.push_back(ue.offset);
    }
    switch (mode) {
    case TrialMode::proposed:
        finite_rounds(cfg, pop, rng, EstimatorMode::proposed);
        break;
    case TrialMode::baseline:
        finite_rounds(cfg, pop, rng, EstimatorMode::baseline);
        break;
    case TrialMode::oracle:
        oracle_rounds(cfg, pop, rng, EstimatorMode::proposed);
        break;
    }
    return finalize(pop, seed, theta_truth, offset_truth);
}

} // namespace

TrialOutcome run_trial_on(const SystemConfig& cfg, Population pop,
                          std::uint64_t seed, std::mt19937_64& rng, TrialMode mode) {
    return run_rounds(cfg, std::move(pop), seed, rng, mode);
}

TrialOutcome run_trial(const SystemConfig& cfg, std::uint64_t seed, TrialMode mode) {
    std::mt19937_64 rng = make_rng(seed);
    Population pop = build_population(cfg, rng);
    return run_rounds(cfg, std::move(pop), seed, rng, mode);
}

TrialOutcome oracle_trial(const SystemConfig& cfg, std::uint64_t seed,
                          EstimatorMode est_mode) {
    std::mt19937_64 rng = make_rng(seed);
    Population pop = build_population(cfg, rng);
    std::vector<double> theta_truth, offset_truth;
    for (const auto& ue : pop) {
        theta_truth.push_back(ue.theta);
        offset_truth.push_back(ue.offset);
    }
    oracle_rounds(cfg, pop, rng, est_mode);
    return finalize(pop, seed, theta_truth, offset_truth);
}

} // namespace ramimo
