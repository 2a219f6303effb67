// Serial reference vs OpenMP kernels on realistic workloads.

#include <benchmark/benchmark.h>

#include <vector>

#include "sbsim/dynamics.hpp"
#include "sbsim/kernels.hpp"

namespace {

const sbsim::SpectralKernels& kernels() {
    static const auto k = [] {
        sbsim::ModelParams p;
        p.delta = 0.1;
        p.omega0 = 0.5;
        p.lambda_ = 1.0;
        p.alpha = 0.1;
        return sbsim::build_kernels(p);
    }();
    return k;
}

std::vector<double> grid(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

void BM_SigmaSerial(benchmark::State& state) {
    const auto w = grid(0.0, 3.0, static_cast<std::size_t>(state.range(0)));
    const auto& k = kernels();
    for (auto _ : state) {
        benchmark::DoNotOptimize(sbsim::kernels::evaluate_serial([&](double x) { return k.big_sigma(x); }, w));
    }
}

void BM_SigmaParallel(benchmark::State& state) {
    const auto w = grid(0.0, 3.0, static_cast<std::size_t>(state.range(0)));
    const auto& k = kernels();
    for (auto _ : state) {
        benchmark::DoNotOptimize(sbsim::kernels::evaluate_parallel([&](double x) { return k.big_sigma(x); }, w));
    }
}

struct CosineWorkload {
    std::vector<double> nodes, coeffs, times;
};

const CosineWorkload& cosine_workload() {
    static const CosineWorkload w = [] {
        sbsim::RuleOptions opts;
        opts.t_max = 400.0;
        const auto rule = sbsim::fidelity_rule(kernels(), opts);
        CosineWorkload c;
        c.nodes = rule.rule.nodes;
        for (std::size_t i = 0; i < rule.rule.size(); ++i) c.coeffs.push_back(rule.rule.weights[i] * rule.rule.values[i]);
        c.times = grid(0.0, 400.0, 2001);
        return c;
    }();
    return w;
}

void BM_CosineSerial(benchmark::State& state) {
    const auto& w = cosine_workload();
    for (auto _ : state) benchmark::DoNotOptimize(sbsim::kernels::cosine_sum_serial(w.nodes, w.coeffs, w.times));
}

void BM_CosineParallel(benchmark::State& state) {
    const auto& w = cosine_workload();
    for (auto _ : state) benchmark::DoNotOptimize(sbsim::kernels::cosine_sum_parallel(w.nodes, w.coeffs, w.times));
}

void BM_FidelityRule(benchmark::State& state) {
    sbsim::RuleOptions opts;
    opts.t_max = 400.0;
    opts.exec = state.range(0) ? sbsim::Execution::Parallel : sbsim::Execution::Serial;
    for (auto _ : state) benchmark::DoNotOptimize(sbsim::fidelity_rule(kernels(), opts));
}

} // namespace

BENCHMARK(BM_SigmaSerial)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SigmaParallel)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CosineSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CosineParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FidelityRule)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
    sbsim::kernels::apply_thread_limit();
    benchmark::Initialize(&argc, argv);
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
