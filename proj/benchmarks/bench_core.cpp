#include <benchmark/benchmark.h>

#include <array>
#include <cstdint>
#include <vector>

#include "pq/congestion.hpp"
#include "pq/continua.hpp"
#include "pq/metric_space.hpp"
#include "pq/quotient.hpp"

namespace {

pq::MetricSpace cloud(int n, std::uint64_t seed) {
    std::uint64_t state = seed;
    auto next = [&state] {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::vector<std::array<double, 2>> pts(n);
    for (auto& p : pts)
        p = {static_cast<double>(next() >> 11) * 0x1.0p-53,
             static_cast<double>(next() >> 11) * 0x1.0p-53};
    return pq::MetricSpace::from_points(pts);
}

void BM_DeltaPDense(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto s = cloud(n, 7);
    s.triangle_certified = false;  // force the dense Dijkstra path
    std::vector<int> class_of(n);
    for (int i = 0; i < n; ++i) class_of[i] = i % (n / 4);
    auto p = pq::Partition::from_class_of(class_of);
    for (auto _ : state) {
        auto q = pq::delta_p(s, p);
        benchmark::DoNotOptimize(q.class_delta.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DeltaPDense)->RangeMultiplier(2)->Range(64, 512)->Complexity();

void BM_DeltaPHubRouted(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto s = cloud(n, 7);
    // two merged classes, the rest singletons: the hub fast path
    std::vector<int> class_of(n);
    for (int i = 0; i < n; ++i) class_of[i] = i < 16 ? 0 : (i < 32 ? 1 : i);
    auto p = pq::Partition::from_class_of(class_of);
    for (auto _ : state) {
        auto q = pq::delta_p(s, p);
        benchmark::DoNotOptimize(q.class_delta.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DeltaPHubRouted)->RangeMultiplier(2)->Range(128, 2048)->Complexity();

void BM_CongestionSet(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto corpus = pq::generate("topologist_sine", n);
    auto params = pq::default_scales(corpus.space);
    for (auto _ : state) {
        auto result = pq::congestion_set(corpus.space, params);
        benchmark::DoNotOptimize(result.points.indices.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CongestionSet)->Arg(500)->Arg(1000)->Arg(2000);

void BM_EpsilonComponents(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto corpus = pq::generate("warsaw_circle", n);
    auto all = pq::SubsetRef::full(corpus.space.n);
    const double delta = 2.0 * corpus.space.max_nn_distance();
    for (auto _ : state) {
        auto p = pq::epsilon_components(corpus.space, all, delta);
        benchmark::DoNotOptimize(p.class_of.data());
    }
}
BENCHMARK(BM_EpsilonComponents)->Arg(600)->Arg(1200)->Arg(2400);

}  // namespace

BENCHMARK_MAIN();
