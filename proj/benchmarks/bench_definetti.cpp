#include <benchmark/benchmark.h>

#include "permafinetti/campaigns.hpp"
#include "permafinetti/definetti.hpp"
#include "permafinetti/rng.hpp"
#include "permafinetti/signed_measure.hpp"

using namespace permafinetti;

namespace {

ExchangeableModel mixture_fixture(int d, long long length) {
    std::vector<ModelComponent> components;
    std::vector<long long> counts(d, length / d);
    counts[0] += length - (length / d) * d;
    components.push_back({0.5, UrnComponent{std::move(counts)}});
    std::vector<double> probs(d, 1.0 / d);
    components.push_back({0.5, IidComponent{std::move(probs)}});
    return ExchangeableModel(d, length, std::move(components));
}

void BM_q1(benchmark::State& state) {
    const auto model = mixture_fixture(static_cast<int>(state.range(0)),
                                       state.range(1));
    const int n = static_cast<int>(state.range(2));
    for (auto _ : state) {
        benchmark::DoNotOptimize(q1(model, n));
    }
}
BENCHMARK(BM_q1)->Args({2, 8, 6})->Args({3, 8, 6})->Args({3, 12, 8});

void BM_q2(benchmark::State& state) {
    const auto model = mixture_fixture(static_cast<int>(state.range(0)),
                                       state.range(1));
    const int n = static_cast<int>(state.range(2));
    for (auto _ : state) {
        benchmark::DoNotOptimize(q2(model, n));
    }
}
BENCHMARK(BM_q2)->Args({2, 8, 6})->Args({3, 8, 6})->Unit(benchmark::kMillisecond);

void BM_pv(benchmark::State& state) {
    const auto model = mixture_fixture(static_cast<int>(state.range(0)),
                                       state.range(1));
    const int n = static_cast<int>(state.range(2));
    const auto law = exact_law(model, n);
    const auto first = q1(model, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pv(law, first));
    }
}
BENCHMARK(BM_pv)->Args({2, 8, 6})->Args({3, 8, 6})->Unit(benchmark::kMillisecond);

void BM_sup_fn_lower(benchmark::State& state) {
    const auto model = mixture_fixture(3, 8);
    const int n = static_cast<int>(state.range(0));
    const auto law = exact_law(model, n);
    const auto first = q1(model, n);
    const auto trials = state.range(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sup_fn_lower(law, first, trials, 7));
    }
}
BENCHMARK(BM_sup_fn_lower)->Args({6, 100})->Args({6, 1000})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
