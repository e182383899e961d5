#include <benchmark/benchmark.h>

#include <cmath>

#include "lrdspec/estimation.hpp"
#include "lrdspec/simulation.hpp"
#include "lrdspec/spectral.hpp"

using namespace lrdspec;

namespace {

SpectralModel fractional_model(int L, LrdKernel kernel) {
    FarimaRational f;
    f.sigma_eigs.resize(L);
    for (int l = 1; l <= L; ++l) f.sigma_eigs[l - 1] = std::pow(static_cast<double>(l), -2.0);
    f.ar.assign(L, {0.7});
    f.ma.assign(L, {});
    LongMemorySymbol alpha;
    alpha.family = LongMemorySymbol::Family::constant;
    alpha.clamp_lo = 0.01;
    alpha.clamp_hi = 0.99;
    return SpectralModel(BasisSpec(L), alpha, f, kernel, ThetaDomain{{0.2}, {0.6}});
}

void BM_covariance_table(benchmark::State& state) {
    const auto model = fractional_model(1, LrdKernel::exact_diff);
    const long max_lag = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(covariance_table(model, 1, {0.4}, max_lag));
    state.SetItemsProcessed(state.iterations() * (max_lag + 1));
}
BENCHMARK(BM_covariance_table)->Arg(1024)->Arg(16384);

void BM_covariance_point(benchmark::State& state) {
    const auto model = fractional_model(1, LrdKernel::exact_diff);
    const long t = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(covariance_symbol(model, t, 1, {0.4}, model.quad));
}
BENCHMARK(BM_covariance_point)->Arg(10)->Arg(400);

void BM_simulate_circulant(benchmark::State& state) {
    const auto model = fractional_model(3, LrdKernel::exact_diff);
    SimConfig cfg;
    cfg.seed = 1;
    const long T = state.range(0);
    for (auto _ : state) {
        cfg.seed++;
        benchmark::DoNotOptimize(simulate_gaussian(model, {0.4}, T, cfg));
    }
}
BENCHMARK(BM_simulate_circulant)->Arg(512)->Arg(4096);

void BM_fdft(benchmark::State& state) {
    const auto model = fractional_model(3, LrdKernel::exact_diff);
    SimConfig cfg;
    cfg.seed = 5;
    const auto path = simulate_gaussian(model, {0.4}, state.range(0), cfg);
    for (auto _ : state) benchmark::DoNotOptimize(fdft(path));
}
BENCHMARK(BM_fdft)->Arg(4096);

void BM_integrated_bias(benchmark::State& state) {
    const auto model = fractional_model(5, LrdKernel::exact_diff);
    for (auto _ : state)
        benchmark::DoNotOptimize(integrated_bias(model, {0.4}, state.range(0), model.quad));
}
BENCHMARK(BM_integrated_bias)->Arg(256);

void BM_estimate(benchmark::State& state) {
    const auto model = fractional_model(3, LrdKernel::power_law);
    SimConfig cfg;
    cfg.seed = 11;
    const auto pset = periodogram(fdft(simulate_gaussian(model, {0.4}, state.range(0), cfg)));
    const WeightSymbol w(Eigen::VectorXd::Ones(3), 2.0);
    OptimizerConfig opt;
    for (auto _ : state) benchmark::DoNotOptimize(estimate_theta(pset, model, w, opt));
}
BENCHMARK(BM_estimate)->Arg(2048);

}  // namespace

BENCHMARK_MAIN();
