#include <benchmark/benchmark.h>

#include <memory>
#include <numeric>
#include <random>
#include <vector>

#include "qsem/closest_vector.hpp"

using namespace qsem;

namespace {

std::shared_ptr<const SparseVector> random_unit_sparse(std::mt19937_64& rng, std::uint64_t dim,
                                                       std::size_t nnz) {
    std::vector<std::uint64_t> coords(dim);
    std::iota(coords.begin(), coords.end(), 0);
    for (std::size_t i = 0; i < nnz; ++i)
        std::swap(coords[i], coords[i + rng() % (dim - i)]);
    std::normal_distribution<double> gauss;
    std::vector<std::pair<std::uint64_t, double>> entries;
    double norm2 = 0;
    do {
        entries.clear();
        norm2 = 0;
        for (std::size_t i = 0; i < nnz; ++i) {
            const double x = gauss(rng);
            entries.emplace_back(coords[i], x);
            norm2 += x * x;
        }
    } while (norm2 <= 1e-12);
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& [coord, value] : entries) value *= inv;
    return std::make_shared<SparseVector>(dim, std::move(entries));
}

ClosestVectorInstance synthetic(std::uint64_t seed, std::size_t num_candidates,
                                std::uint64_t dim, std::size_t nnz) {
    std::mt19937_64 rng(seed);
    auto query = random_unit_sparse(rng, dim, nnz);
    std::vector<std::shared_ptr<const FlatVector>> cands;
    for (std::size_t j = 0; j < num_candidates; ++j)
        cands.push_back(random_unit_sparse(rng, dim, nnz));
    return ClosestVectorInstance(std::move(query), std::move(cands));
}

}  // namespace

static void BM_NNDirect(benchmark::State& state) {
    const ClosestVectorInstance inst = synthetic(11, state.range(0), 256, 16);
    for (auto _ : state) {
        NNResult r = nn_direct(inst);
        benchmark::DoNotOptimize(r);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NNDirect)->RangeMultiplier(4)->Range(4, 256)->Complexity();

static void BM_NNMonteCarlo(benchmark::State& state) {
    const ClosestVectorInstance inst = synthetic(12, state.range(0), 256, 16);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        NNResult r = nn_monte_carlo(inst, 0.2, 0.1, ++seed);
        benchmark::DoNotOptimize(r);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NNMonteCarlo)->RangeMultiplier(4)->Range(4, 64)->Complexity();

static void BM_NNQuantumSim(benchmark::State& state) {
    const ClosestVectorInstance inst = synthetic(13, state.range(0), 256, 16);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        NNResult r = nn_quantum_sim(inst, 0.05, 0.1, ++seed);
        benchmark::DoNotOptimize(r);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NNQuantumSim)->RangeMultiplier(4)->Range(4, 256)->Complexity();

BENCHMARK_MAIN();
