#include <benchmark/benchmark.h>

#include <vector>

#include "qbm/classical.hpp"
#include "qbm/correlations.hpp"
#include "qbm/diffusion.hpp"
#include "qbm/noise_corr.hpp"
#include "qbm/oup.hpp"
#include "qbm/susceptibility.hpp"

namespace {

qbm::ModelParams fig_params(double gamma) {
    qbm::ModelParams p;
    p.gamma = gamma;
    p.temperature = 0.053;
    p.nu = 1e7;
    p.omega_d = 1e8;
    return p;
}

void BM_Susceptibility(benchmark::State& state) {
    auto p = fig_params(1.0);
    double t = 0.0;
    for (auto _ : state) {
        auto v = qbm::eval_susceptibility(t, p);
        benchmark::DoNotOptimize(v);
        t += 1e-3;
        if (t > 10.0) t = 0.0;
    }
}
BENCHMARK(BM_Susceptibility);

void BM_PositionCorrelation(benchmark::State& state) {
    auto p = fig_params(4.0);
    double t = 1e-3;
    for (auto _ : state) {
        auto c = qbm::eval_correlation(t, p, true);
        benchmark::DoNotOptimize(c);
        t += 1e-3;
        if (t > 10.0) t = 1e-3;
    }
}
BENCHMARK(BM_PositionCorrelation);

void BM_GammaSumAliveTail(benchmark::State& state) {
    // small nu keeps ~100 Matsubara terms alive
    qbm::ModelParams p;
    p.gamma = 1.0;
    p.nu = 2.0;
    p.omega_d = 20.0;
    for (auto _ : state) {
        double v = qbm::gamma_sum(0.1, p, 0);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_GammaSumAliveTail);

void BM_PhiPhi(benchmark::State& state) {
    qbm::NoiseKernel k(fig_params(1.0));
    double s = 1e-3;
    for (auto _ : state) {
        auto v = k.phi_phi(5.0, s);
        benchmark::DoNotOptimize(v);
        s += 1e-4;
        if (s > 5.0) s = 1e-3;
    }
}
BENCHMARK(BM_PhiPhi);

void BM_D1(benchmark::State& state) {
    qbm::DiffusionEngine eng(fig_params(4.0));
    for (auto _ : state) {
        auto v = eng.d1(static_cast<double>(state.range(0)));
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_D1)->Arg(1)->Arg(5);

void BM_ClassicalPair(benchmark::State& state) {
    qbm::ClassicalParams cp{4.0, 0.053};
    double t = 1e-3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(qbm::d_clas(t, cp));
        benchmark::DoNotOptimize(qbm::sigma_clas(t, cp));
        t += 1e-3;
        if (t > 10.0) t = 1e-3;
    }
}
BENCHMARK(BM_ClassicalPair);

void BM_SimulateEnsemble(benchmark::State& state) {
    qbm::CoefficientTable table;
    table.times = {0.0, 10.0};
    table.omega = {-0.268, -0.268};
    table.diffusion = {0.05, 0.05};
    for (auto _ : state) {
        auto stats = qbm::simulate_ensemble(table, state.range(0), 1e-3, 2.0, 7);
        benchmark::DoNotOptimize(stats);
    }
}
BENCHMARK(BM_SimulateEnsemble)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
