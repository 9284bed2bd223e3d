#include <benchmark/benchmark.h>

#include <random>

#include "fixtures.hpp"
#include "strata/bundles.hpp"
#include "strata/partitions.hpp"

using namespace strata;
using fx::Q;

static void BM_FoldCounts(benchmark::State& state) {
    const int n = int(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(fold_partition_counts(2, n));
}
BENCHMARK(BM_FoldCounts)->Arg(20)->Arg(100)->Arg(400);

static void BM_SigmaRecursion(benchmark::State& state) {
    const int n = int(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(count_double_partitions_sigma(n));
}
BENCHMARK(BM_SigmaRecursion)->Arg(20)->Arg(100);

static void BM_EnumerateDoublePartitions(benchmark::State& state) {
    const int n = int(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_double_partitions(n).size());
}
BENCHMARK(BM_EnumerateDoublePartitions)->DenseRange(6, 12, 3);

static void BM_Hasse(benchmark::State& state) {
    const int n = int(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(hasse_diagram(n, true).edges.size());
}
BENCHMARK(BM_Hasse)->DenseRange(3, 6);

static void BM_GapDistance(benchmark::State& state) {
    const int n = int(state.range(0));
    std::mt19937 rng(1);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd a(n, n / 2), b(n, n / 2);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n / 2; ++c) {
            a(r, c) = cplx(g(rng), g(rng));
            b(r, c) = cplx(g(rng), g(rng));
        }
    auto sa = Subspace::span(a), sb = Subspace::span(b);
    for (auto _ : state) benchmark::DoNotOptimize(gap_distance(sa, sb));
}
BENCHMARK(BM_GapDistance)->Arg(5)->Arg(20)->Arg(80);

static void BM_JordanizabilityReport(benchmark::State& state) {
    auto fam = fx::three_by_three();
    for (auto _ : state) benchmark::DoNotOptimize(jordanizability_report(fam, {0.0, 1.0}).verdict);
}
BENCHMARK(BM_JordanizabilityReport);

static void BM_DarbouxJet(benchmark::State& state) {
    const int K = int(state.range(0));
    auto p = fx::n3_coalescent_problem();
    auto F0 = fx::n3_coalescent_initial_value(p);
    for (auto _ : state) benchmark::DoNotOptimize(de_solve_jet(p, F0, K).feasible);
}
BENCHMARK(BM_DarbouxJet)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

static void BM_DarbouxOracle(benchmark::State& state) {
    const int K = int(state.range(0));
    auto p = fx::n3_coalescent_problem();
    auto F0 = fx::n3_coalescent_initial_value(p);
    for (auto _ : state) benchmark::DoNotOptimize(de_oracle_solve(p, F0, K).n);
}
BENCHMARK(BM_DarbouxOracle)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

static void BM_FormalSimplify(benchmark::State& state) {
    const int K = int(state.range(0));
    auto conn = fx::de_connection(K + 2);
    for (auto _ : state) benchmark::DoNotOptimize(formal_simplify(conn, K, SimplifyMode::coalescent).K);
}
BENCHMARK(BM_FormalSimplify)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
