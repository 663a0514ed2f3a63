#include <benchmark/benchmark.h>

#include "entlab/classdyn.hpp"
#include "entlab/eig.hpp"
#include "entlab/qpartitions.hpp"
#include "entlab/quantization.hpp"

using namespace entlab;

static void BM_MatrixMultiply(benchmark::State& state) {
    const int n = (int)state.range(0);
    qt::QuantumTorusSpace space(n);
    const auto u = qt::cat_propagator(space, cl::ToralAutomorphism::cat());
    for (auto _ : state) {
        auto prod = u * u;
        benchmark::DoNotOptimize(prod);
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_MatrixMultiply)->Arg(64)->Arg(128)->Arg(256)->Complexity();

static void BM_UnitaryEig(benchmark::State& state) {
    const int n = (int)state.range(0);
    qt::QuantumTorusSpace space(n);
    const auto u = qt::cat_propagator(space, cl::ToralAutomorphism::cat());
    for (auto _ : state) {
        auto dec = num::unitary_eig(u, 1);
        benchmark::DoNotOptimize(dec);
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_UnitaryEig)->Arg(32)->Arg(64)->Arg(128)->Complexity();

static void BM_RefinedWeights(benchmark::State& state) {
    const int depth = (int)state.range(0);
    qt::QuantumTorusSpace space(128);
    const auto a = cl::ToralAutomorphism::cat();
    const auto u = qt::cat_propagator(space, a);
    const qp::QuantumPartition part(space, qp::SmoothPartition(4, 0.25, 1.0 / 16.0));
    const auto psi = qt::random_state(128, 1);
    for (auto _ : state) {
        auto rw = qp::refined_weights(psi, part, u, depth, qp::Ordering::Forward);
        benchmark::DoNotOptimize(rw);
    }
}
BENCHMARK(BM_RefinedWeights)->Arg(2)->Arg(4)->Arg(6);

static void BM_MaxRefinedNorms(benchmark::State& state) {
    const int depth = (int)state.range(0);
    qt::QuantumTorusSpace space(128);
    const auto a = cl::ToralAutomorphism::cat();
    const auto u = qt::cat_propagator(space, a);
    const qp::QuantumPartition part(space, qp::SmoothPartition(4, 0.25, 1.0 / 16.0));
    const auto dec = num::unitary_eig(u, 1);
    const auto psi = dec.eigenvector(17);
    for (auto _ : state) {
        auto norms = qp::max_refined_norms(psi, part, u, depth);
        benchmark::DoNotOptimize(norms);
    }
}
BENCHMARK(BM_MaxRefinedNorms)->Arg(6)->Arg(9)->Arg(12);

BENCHMARK_MAIN();
