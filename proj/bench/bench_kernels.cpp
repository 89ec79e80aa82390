#include "tendeval/alignment.hpp"
#include "tendeval/consistency.hpp"
#include "tendeval/simulation.hpp"

#include <benchmark/benchmark.h>

#include <map>

using namespace tendeval;

namespace {

const SynthCorpus& corpus(int annotators)
{
    static std::map<int, SynthCorpus> cache;
    auto it = cache.find(annotators);
    if (it == cache.end()) {
        SynthConfig cfg;
        cfg.annotators = annotators;
        cfg.samples = 2000;
        cfg.feature_dim = 1 + cfg.clusters + annotators + 64;
        it = cache.emplace(annotators, gen_corpus(cfg)).first;
    }
    return it->second;
}

void consistency(benchmark::State& state, Exec exec)
{
    const auto& c = corpus(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(consistency_matrix(c.annotations, kDefaultMinOverlap, exec));
}

void similarity(benchmark::State& state, Exec exec)
{
    const auto& c = corpus(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(model_similarity(c.features, exec));
}

} // namespace

BENCHMARK_CAPTURE(consistency, serial, Exec::serial)->Arg(12)->Arg(48);
BENCHMARK_CAPTURE(consistency, parallel, Exec::parallel)->Arg(12)->Arg(48);
BENCHMARK_CAPTURE(similarity, serial, Exec::serial)->Arg(12)->Arg(48);
BENCHMARK_CAPTURE(similarity, parallel, Exec::parallel)->Arg(12)->Arg(48);

BENCHMARK_MAIN();
