#include <benchmark/benchmark.h>

#include "ginspectra/csr.hpp"
#include "ginspectra/eig.hpp"
#include "ginspectra/ensembles.hpp"
#include "ginspectra/rng.hpp"
#include "ginspectra/spin_ops.hpp"

using namespace ginspectra;

static void BM_eigensolver(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    RngStream rng(123, 1);
    const ComplexMatrix a = sample_ginue(n, rng);
    for (auto _ : state) {
        const Spectrum s = compute_spectrum(a);
        benchmark::DoNotOptimize(s.residual_bound);
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_eigensolver)->Arg(16)->Arg(64)->Arg(128)->Complexity();

static void BM_hermitian_fastpath(benchmark::State& state) {
    SpinChainSpec spec;
    spec.model = SpinModel::H0;
    spec.length = 6;
    RealizedParams p;
    p.lambda = {0.8};
    const ComplexMatrix h = build_hamiltonian(spec, p);
    for (auto _ : state) {
        const auto s = hermitian_fastpath(h);
        benchmark::DoNotOptimize(s->eigenvalues.data());
    }
}
BENCHMARK(BM_hermitian_fastpath);

static void BM_build_hamiltonian(benchmark::State& state) {
    const int length = static_cast<int>(state.range(0));
    SpinChainSpec spec;
    spec.model = SpinModel::H2;
    spec.length = length;
    RngStream rng(11, 1);
    RealizedParams p;
    p.gamma = {0.3};
    p.lambda.resize(static_cast<std::size_t>(length));
    p.lambda1.resize(static_cast<std::size_t>(length));
    for (double& x : p.lambda) x = rng.gauss();
    for (double& x : p.lambda1) x = rng.gauss();
    for (auto _ : state) {
        const ComplexMatrix h = build_hamiltonian(spec, p);
        benchmark::DoNotOptimize(h.data());
    }
}
BENCHMARK(BM_build_hamiltonian)->Arg(6)->Arg(8);

static void BM_sample_ginue(benchmark::State& state) {
    RngStream rng(7, 1);
    for (auto _ : state) {
        const ComplexMatrix m = sample_ginue(256, rng);
        benchmark::DoNotOptimize(m.data());
    }
}
BENCHMARK(BM_sample_ginue);

static void BM_csr(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    RngStream rng(55, 1);
    Spectrum s;
    s.eigenvalues.reserve(n);
    for (int i = 0; i < n; ++i) s.eigenvalues.push_back(rng.gauss_complex());
    for (auto _ : state) {
        const CsrSet set = complex_spacing_ratios(s);
        benchmark::DoNotOptimize(set.ratios.data());
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_csr)->Arg(1000)->Arg(10000)->Complexity();

BENCHMARK_MAIN();
