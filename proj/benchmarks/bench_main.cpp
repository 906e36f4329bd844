#include <benchmark/benchmark.h>

#include <numbers>

#include "qkband/analytic.hpp"
#include "qkband/dataset.hpp"
#include "qkband/kernels.hpp"
#include "qkband/linalg.hpp"
#include "qkband/metrics.hpp"
#include "qkband/rng.hpp"
#include "qkband/svm.hpp"

using namespace qkband;

namespace {

Matrix uniform_data(std::size_t n, int d, std::uint64_t seed) {
    return synth_uniform(n, d, seed).features;
}

KernelSpec fqk_spec(int n, double c) {
    KernelSpec spec;
    spec.kind = KernelKind::FQK;
    spec.circuit = make_circuit_spec(CircuitFamily::SeparableRX, n, 2);
    spec.bandwidth = c;
    return spec;
}

}  // namespace

static void BM_EncodeState(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const CircuitSpec spec = make_circuit_spec(CircuitFamily::IQP, n, 2);
    std::vector<double> x(static_cast<std::size_t>(n), 0.37);
    for (auto _ : state) benchmark::DoNotOptimize(encode_state(spec, x));
}
BENCHMARK(BM_EncodeState)->Arg(4)->Arg(8)->Arg(12);

static void BM_GramFqk(benchmark::State& state) {
    const auto n_samples = static_cast<std::size_t>(state.range(0));
    const Matrix data = uniform_data(n_samples, 4, 1);
    const KernelSpec spec = fqk_spec(4, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(gram(spec, data));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GramFqk)->Arg(80)->Arg(160)->Arg(320)->Complexity();

static void BM_SymEigValues(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix data = uniform_data(n, 4, 2);
    const Matrix k = gram(fqk_spec(4, 0.5), data).values;
    for (auto _ : state) benchmark::DoNotOptimize(sym_eig(k, false));
}
BENCHMARK(BM_SymEigValues)->Arg(160)->Arg(320)->Arg(720);

static void BM_SymEigVectors(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix data = uniform_data(n, 4, 2);
    const Matrix k = gram(fqk_spec(4, 0.5), data).values;
    for (auto _ : state) benchmark::DoNotOptimize(sym_eig(k, true));
}
BENCHMARK(BM_SymEigVectors)->Arg(160)->Arg(320);

static void BM_GeometricDifference(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix data = uniform_data(n, 4, 3);
    KernelSpec rbf;
    rbf.kind = KernelKind::RBF;
    rbf.bandwidth = 0.5;
    const Matrix kc = gram(rbf, data).values;
    const Matrix kq = gram(fqk_spec(4, 0.5), data).values;
    for (auto _ : state) benchmark::DoNotOptimize(geometric_difference(kc, kq, 1.0 / 64.0));
}
BENCHMARK(BM_GeometricDifference)->Arg(160)->Arg(320);

static void BM_SvmFit(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Dataset data = synth_hidden_manifold(n, 6, 3, 7);
    KernelSpec rbf;
    rbf.kind = KernelKind::RBF;
    rbf.bandwidth = 0.3;
    const Matrix k = gram(rbf, data.features).values;
    for (auto _ : state)
        benchmark::DoNotOptimize(svm_fit(LabeledSet{k, data.labels}, 128.0));
}
BENCHMARK(BM_SvmFit)->Arg(80)->Arg(320);

static void BM_MonteCarloMetrics(benchmark::State& state) {
    const AnalyticParams p{4, 2, 0.5};
    for (auto _ : state)
        benchmark::DoNotOptimize(monte_carlo_check(p, static_cast<std::size_t>(state.range(0)), 1));
}
BENCHMARK(BM_MonteCarloMetrics)->Arg(160)->Arg(720);

BENCHMARK_MAIN();
