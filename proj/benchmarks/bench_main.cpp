// Microbenchmarks for the training and scoring hot paths.
#include <benchmark/benchmark.h>

#include <vector>

#include "hfstrat/encode.hpp"
#include "hfstrat/logistic.hpp"
#include "hfstrat/metrics.hpp"
#include "hfstrat/rng.hpp"
#include "hfstrat/stacking.hpp"
#include "hfstrat/synth.hpp"
#include "hfstrat/tree.hpp"

namespace {

using namespace hfstrat;

// Shared encoded cohort; generated once, reused across benchmarks.
const DesignMatrix& cohort_matrix() {
    static const DesignMatrix dm = [] {
        GeneratorSpec spec;
        spec.size = 300;
        return encode(preprocess(synthesize_cohort(spec, 7), default_schema(),
                                 PreprocessConfig{}));
    }();
    return dm;
}

void BM_rng_next_u64(benchmark::State& state) {
    RngStream rng(42, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rng.next_u64());
    }
}
BENCHMARK(BM_rng_next_u64);

void BM_synthesize_cohort(benchmark::State& state) {
    GeneratorSpec spec;
    spec.size = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(synthesize_cohort(spec, 7));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_synthesize_cohort)->Arg(100)->Arg(400);

void BM_encode_cohort(benchmark::State& state) {
    GeneratorSpec spec;
    spec.size = 300;
    const LabeledCohort cohort =
        preprocess(synthesize_cohort(spec, 7), default_schema(), PreprocessConfig{});
    for (auto _ : state) {
        benchmark::DoNotOptimize(encode(cohort));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cohort.size()));
}
BENCHMARK(BM_encode_cohort);

void BM_logistic_train(benchmark::State& state) {
    const DesignMatrix& dm = cohort_matrix();
    for (auto _ : state) {
        benchmark::DoNotOptimize(train_logistic(dm.x, dm.y, {.c = 1.0}));
    }
}
BENCHMARK(BM_logistic_train)->Unit(benchmark::kMillisecond);

void BM_forest_train(benchmark::State& state) {
    const DesignMatrix& dm = cohort_matrix();
    ForestParams params;
    params.n_trees = static_cast<int>(state.range(0));
    params.max_depth = 5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(train_forest(dm.x, dm.y, params, 31));
    }
}
BENCHMARK(BM_forest_train)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_metrics_evaluate(benchmark::State& state) {
    RngStream rng(9, 0);
    const std::size_t n = 5000;
    std::vector<int> truth(n), predicted(n);
    for (std::size_t i = 0; i < n; ++i) {
        truth[i] = static_cast<int>(rng.next_below(2));
        predicted[i] = static_cast<int>(rng.next_below(2));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate(truth, predicted));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_metrics_evaluate);

void BM_stacking_predict(benchmark::State& state) {
    const DesignMatrix& dm = cohort_matrix();
    static const StackingTrainResult trained = [] {
        StackingConfig cfg;
        cfg.seed = 11;
        cfg.k = 3;
        cfg.clinical_grid.axes = {{"C", {HyperValue{1.0}}}};
        cfg.echo_grid = cfg.clinical_grid;
        cfg.meta_grid = cfg.clinical_grid;
        cfg.forest_grid.axes = {{"n_trees", {HyperValue{std::int64_t{20}}}},
                                {"max_depth", {HyperValue{std::int64_t{5}}}},
                                {"min_samples_leaf", {HyperValue{std::int64_t{1}}}}};
        return train_stacking(cohort_matrix(), cfg);
    }();
    std::size_t row = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(predict_stacking(trained.ensemble, dm.x.row(row)));
        row = (row + 1) % dm.rows();
    }
}
BENCHMARK(BM_stacking_predict);

}  // namespace

BENCHMARK_MAIN();
