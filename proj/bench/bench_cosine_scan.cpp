#include <random>
#include <vector>

#include <benchmark/benchmark.h>
#include <omp.h>

#include "service_rag/kernels.hpp"

using namespace service_rag;

namespace {

struct Fixture {
    std::size_t dim;
    std::vector<float> rows;
    std::vector<long double> norms;
    std::vector<float> query;
    std::vector<double> out;

    Fixture(std::size_t n, std::size_t d) : dim(d), rows(n * d), norms(n), query(d), out(n) {
        std::mt19937_64 rng(42);
        std::normal_distribution<float> g;
        for (auto& x : rows) x = g(rng);
        for (auto& x : query) x = g(rng);
        kernels::squared_norms(rows, dim, norms);
    }
};

void scan_args(benchmark::internal::Benchmark* b) {
    for (long n : {1'000L, 100'000L}) {
        for (long dim : {256L, 1536L}) b->Args({n, dim});
    }
}

void BM_CosineScanSerial(benchmark::State& state) {
    Fixture f(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) {
        kernels::cosine_scan_serial(f.rows, f.dim, f.norms, f.query, f.out);
        benchmark::DoNotOptimize(f.out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_CosineScanParallel(benchmark::State& state) {
    Fixture f(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) {
        kernels::cosine_scan(f.rows, f.dim, f.norms, f.query, f.out);
        benchmark::DoNotOptimize(f.out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
    state.counters["threads"] = omp_get_max_threads();
}

}  // namespace

BENCHMARK(BM_CosineScanSerial)->Apply(scan_args)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CosineScanParallel)->Apply(scan_args)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
