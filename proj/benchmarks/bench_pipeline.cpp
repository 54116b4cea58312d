#include <benchmark/benchmark.h>

#include <complex>

#include "ramimo/airlink.hpp"
#include "ramimo/codebook.hpp"
#include "ramimo/estimator.hpp"
#include "ramimo/rng.hpp"
#include "ramimo/trial.hpp"

namespace {

using namespace ramimo;

SystemConfig bench_config(int m_antennas, int n_active) {
    SystemConfig cfg;
    cfg.m_antennas = m_antennas;
    cfg.n_active = n_active;
    return cfg;
}

void BM_PilotProcessing(benchmark::State& state) {
    const SystemConfig cfg = bench_config(static_cast<int>(state.range(0)), 14);
    const Eigen::MatrixXcd t = time_codebook(cfg.q_symbols);
    auto rng = make_rng(1);
    const Population pop = build_population(cfg, rng);
    const ChannelRealization ch = sample_channel(pop, cfg.m_antennas, rng);
    const PilotBlock block =
        synthesize_uplink(pop, ch, cfg.n_subcarriers, t, cfg.snr_db, rng);
    for (auto _ : state) {
        auto reports = estimate_all(block, t, cfg, EstimatorMode::proposed);
        benchmark::DoNotOptimize(reports);
    }
}
BENCHMARK(BM_PilotProcessing)->Arg(100)->Arg(200)->Arg(400);

void BM_SubspaceOffsets(benchmark::State& state) {
    const int n = 8;
    const int d = static_cast<int>(state.range(0));
    auto rng = make_rng(2);
    Eigen::MatrixXcd r = 0.05 * Eigen::MatrixXcd::Identity(n, n);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int s = 0; s < d; ++s) {
        const Eigen::VectorXcd c = steering(unit(rng), n);
        r += c * c.adjoint();
    }
    for (auto _ : state) {
        auto offsets = subspace_offsets(r, d);
        benchmark::DoNotOptimize(offsets);
    }
}
BENCHMARK(BM_SubspaceOffsets)->Arg(2)->Arg(4)->Arg(7);

void BM_PowerSumRoots(benchmark::State& state) {
    const int n = 8;
    const int r = static_cast<int>(state.range(0));
    auto rng = make_rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::VectorXcd p = Eigen::VectorXcd::Zero(n);
    for (int s = 0; s < r; ++s) {
        const double eps = unit(rng);
        for (int i = 0; i < n; ++i)
            p(i) += std::exp(std::complex<double>(0.0, 2.0 * M_PI * i * eps));
    }
    for (auto _ : state) {
        auto roots = solve_power_sums(p, r, 0.35);
        benchmark::DoNotOptimize(roots);
    }
}
BENCHMARK(BM_PowerSumRoots)->Arg(2)->Arg(4)->Arg(7);

void BM_FullTrial(benchmark::State& state) {
    const SystemConfig cfg = bench_config(200, static_cast<int>(state.range(0)));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        auto out = run_trial(cfg, seed++, TrialMode::proposed);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_FullTrial)->Arg(6)->Arg(14)->Arg(22);

} // namespace

BENCHMARK_MAIN();
