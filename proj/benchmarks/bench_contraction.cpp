#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "qsem/deferred.hpp"
#include "qsem/pregroup.hpp"
#include "qsem/tensor.hpp"

using namespace qsem;

namespace {

MeaningTensor random_unit(std::mt19937_64& rng, std::vector<std::size_t> dims) {
    std::normal_distribution<double> gauss;
    MeaningTensor t(dims);
    for (std::uint64_t i = 0; i < t.flat_size(); ++i) t.set(i, gauss(rng));
    return normalize(t);
}

// "adj^k noun iv": a sentence growing linearly in the adjective count.
TypedSentence adjective_chain(std::mt19937_64& rng, std::size_t adjectives, std::size_t dim) {
    std::vector<std::string> tokens;
    std::vector<PregroupType> types;
    std::vector<MeaningTensor> tensors;
    for (std::size_t a = 0; a < adjectives; ++a) {
        tokens.push_back("adj" + std::to_string(a));
        types.push_back(parse_pregroup_type("n n^l"));
        tensors.push_back(random_unit(rng, {dim, dim}));
    }
    tokens.push_back("noun");
    types.push_back(parse_pregroup_type("n"));
    tensors.push_back(random_unit(rng, {dim}));
    tokens.push_back("verb");
    types.push_back(parse_pregroup_type("n^r s"));
    tensors.push_back(random_unit(rng, {dim, dim}));
    return make_typed_sentence(tokens, types, tensors);
}

TypedSentence svo(std::mt19937_64& rng, std::size_t dim) {
    return make_typed_sentence(
        {"subject", "verb", "object"},
        {parse_pregroup_type("n"), parse_pregroup_type("n^r s n^l"), parse_pregroup_type("n")},
        {random_unit(rng, {dim}), random_unit(rng, {dim, dim, dim}), random_unit(rng, {dim})});
}

}  // namespace

static void BM_EvaluateSentence(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const TypedSentence sent = adjective_chain(rng, state.range(0), 8);
    for (auto _ : state) {
        MeaningTensor phi = evaluate_sentence(sent.tensors, sent.matching);
        benchmark::DoNotOptimize(phi);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EvaluateSentence)->RangeMultiplier(2)->Range(1, 64)->Complexity();

static void BM_DeferredBuild(benchmark::State& state) {
    std::mt19937_64 rng(2);
    const std::size_t dim = state.range(0);
    const TypedSentence sent = svo(rng, dim);
    const std::vector<MeaningTensor> classifiers = {random_unit(rng, {dim})};
    for (auto _ : state) {
        DeferredInstance inst = build_deferred(sent, classifiers);
        benchmark::DoNotOptimize(inst);
    }
}
BENCHMARK(BM_DeferredBuild)->RangeMultiplier(2)->Range(4, 32);

static void BM_DeferredInner(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const std::size_t dim = state.range(0);
    const TypedSentence sent = svo(rng, dim);
    const std::vector<MeaningTensor> classifiers = {random_unit(rng, {dim})};
    const DeferredInstance inst = build_deferred(sent, classifiers);
    for (auto _ : state) benchmark::DoNotOptimize(inst.inner(0));
}
BENCHMARK(BM_DeferredInner)->RangeMultiplier(2)->Range(4, 32);

static void BM_ProductVectorEntry(benchmark::State& state) {
    std::mt19937_64 rng(4);
    const std::size_t factors = state.range(0);
    const std::size_t dim = 8;
    std::vector<MeaningTensor> parts;
    std::vector<std::size_t> factor_of_wire, factor_wire;
    for (std::size_t f = 0; f < factors; ++f) {
        parts.push_back(random_unit(rng, {dim}));
        factor_of_wire.push_back(f);
        factor_wire.push_back(0);
    }
    const ProductVector v(parts, factor_of_wire, factor_wire);
    std::uint64_t coord = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(v.entry(coord));
        coord = (coord * 2862933555777941757ull + 3037000493ull) % v.dim();
    }
    state.SetComplexityN(factors);
}
BENCHMARK(BM_ProductVectorEntry)->RangeMultiplier(2)->Range(1, 8)->Complexity();

BENCHMARK_MAIN();
