#include <benchmark/benchmark.h>

#include "permafinetti/campaigns.hpp"
#include "permafinetti/expansion.hpp"
#include "permafinetti/permanent.hpp"
#include "permafinetti/rng.hpp"

using namespace permafinetti;

namespace {

ComplexMatrix fixture(std::size_t n_rows, std::size_t n_cols) {
    TrialRng rng(0xbe9c4u, n_rows * 131 + n_cols);
    return random_matrix(MatrixFamily::UnitDisk, n_rows, n_cols, rng);
}

void BM_per_naive(benchmark::State& state) {
    const auto z = fixture(static_cast<std::size_t>(state.range(0)),
                           static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(per_naive(z));
    }
}
BENCHMARK(BM_per_naive)->Args({6, 6})->Args({8, 8})->Args({10, 7});

void BM_per_genfunc(benchmark::State& state) {
    const auto z = fixture(static_cast<std::size_t>(state.range(0)),
                           static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(per_genfunc(z));
    }
}
BENCHMARK(BM_per_genfunc)->Args({8, 8})->Args({16, 12})->Args({24, 16})->Args({30, 20})
    ->Unit(benchmark::kMillisecond);

void BM_per_identical_columns(benchmark::State& state) {
    const auto z = fixture(static_cast<std::size_t>(state.range(0)), 1);
    const auto col = z.column(0);
    const auto n = static_cast<std::size_t>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(per_identical_columns(col, n));
    }
}
BENCHMARK(BM_per_identical_columns)->Args({64, 32})->Args({256, 128});

void BM_h_approx(benchmark::State& state) {
    const auto z = fixture(static_cast<std::size_t>(state.range(0)),
                           static_cast<std::size_t>(state.range(1)));
    const auto ell = static_cast<std::size_t>(state.range(2));
    for (auto _ : state) {
        benchmark::DoNotOptimize(h_approx(z, ell));
    }
}
BENCHMARK(BM_h_approx)->Args({8, 6, 3})->Args({16, 10, 3})->Args({16, 10, 10});

}  // namespace
