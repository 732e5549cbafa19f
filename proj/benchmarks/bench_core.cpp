#include <benchmark/benchmark.h>

#include "elastica/estimator.hpp"
#include "elastica/likelihood.hpp"
#include "elastica/random.hpp"
#include "elastica/simulate.hpp"

namespace {

elastica::SystemConfig config(std::size_t n, std::size_t d) {
    elastica::SystemConfig c;
    c.n_particles = n;
    c.dim = d;
    std::vector<double> diag(d);
    for (std::size_t j = 0; j < d; ++j) diag[j] = 1.0 + static_cast<double>(j);
    c.theta = elastica::SymMatrix::diagonal(diag);
    c.init_variances.assign(d, 0.5);
    c.t_final = 1.0;
    c.n_steps = elastica::default_step_count(c.theta, c.t_final);
    c.seed = 1;
    return c;
}

void BM_SimulateInteracting(benchmark::State& state) {
    const auto c = config(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(elastica::simulate_interacting(c));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.n_particles * c.dim * c.n_steps));
}
BENCHMARK(BM_SimulateInteracting)->Args({100, 1})->Args({100, 4})->Args({1000, 2})->Unit(benchmark::kMillisecond);

void BM_SufficientStats(benchmark::State& state) {
    const auto c = config(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    const auto bundle = elastica::simulate_interacting(c);
    for (auto _ : state) {
        benchmark::DoNotOptimize(elastica::sufficient_stats(bundle));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.n_particles * c.dim * c.n_steps));
}
BENCHMARK(BM_SufficientStats)->Args({100, 1})->Args({100, 4})->Args({1000, 2})->Unit(benchmark::kMillisecond);

void BM_SymEigen(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    elastica::SplitMix64 rng(3);
    elastica::Matrix m(d, d);
    for (auto& v : m.data()) v = rng.uniform_open() - 0.5;
    const auto s = elastica::SymMatrix::symmetrize(m);
    for (auto _ : state) {
        benchmark::DoNotOptimize(elastica::sym_eigen(s));
    }
}
BENCHMARK(BM_SymEigen)->RangeMultiplier(2)->Range(2, 64);

}  // namespace
BENCHMARK_MAIN();
