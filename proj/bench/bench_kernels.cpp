// Serial reference kernels against their OpenMP counterparts.
// The second benchmark argument is the OpenMP thread count; serial runs ignore it.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "agestack/core/manifest.hpp"
#include "agestack/core/prng.hpp"
#include "agestack/estimators/simulator.hpp"
#include "agestack/learners/bagging.hpp"
#include "agestack/learners/kernels.hpp"
#include "agestack/stacking/stacking.hpp"

using namespace agestack;

namespace {

struct Dataset {
  learners::FeatureMatrix x;
  std::vector<double> y;
};

Dataset random_dataset(std::size_t n, std::size_t d, std::uint64_t seed) {
  core::SplitMix64 rng(seed);
  std::vector<double> values(n * d);
  for (auto& v : values) v = std::floor(rng.uniform() * 64.0);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = values[i * d] * 0.3 + rng.normal() * 2.0;
  return {learners::FeatureMatrix(n, d, std::move(values)), std::move(y)};
}

const stacking::StackingMatrix& stacking_matrix() {
  static const auto matrix = [] {
    const auto pool = core::synthetic_candidates(200, core::AgeYears(0), core::AgeYears(25));
    const auto manifest = core::curate_balanced(pool, 200, core::AgeYears(0), core::AgeYears(25), 7);
    const auto profiles = estimators::read_profiles(std::filesystem::path(AGESTACK_PROFILES));
    std::vector<core::Prediction> all;
    std::vector<std::string> order;
    for (const auto& p : profiles) {
      auto rows = estimators::simulate(p, manifest, 7);
      all.insert(all.end(), rows.begin(), rows.end());
      order.push_back(p.estimator_id);
    }
    return stacking::assemble(manifest, all, order);
  }();
  return matrix;
}

Execution mode(const benchmark::State& state) {
  return state.range(0) ? Execution::Parallel : Execution::Serial;
}

void set_threads(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(1)));
  state.SetLabel(state.range(0) ? "parallel" : "serial");
}

void BM_BestSplit(benchmark::State& state) {
  set_threads(state);
  const auto data = random_dataset(20000, 16, 1);
  const auto cols = learners::kernels::SortedColumns::build(data.x);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        learners::kernels::best_split(mode(state), data.x, data.y, cols, 0, data.x.rows()));
  }
}

void BM_FitBagging(benchmark::State& state) {
  set_threads(state);
  const auto data = random_dataset(4000, 5, 2);
  learners::BaggingParams params;
  params.n_members = 16;
  params.max_depth = 8;
  params.seed = 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(learners::fit_bagging(data.x, data.y, params, mode(state)));
  }
}

void BM_StackOof(benchmark::State& state) {
  set_threads(state);
  const auto& matrix = stacking_matrix();
  const auto plan = stacking::plan_folds(matrix.subject_ids, 10, 7);
  const learners::LearnerSpec spec = learners::GbrParams{50, 0.1, 3, 2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(stacking::stack_oof(matrix, plan, spec, mode(state)));
  }
}

void modes(benchmark::internal::Benchmark* b) {
  b->Args({0, 1});
  for (const int t : {1, 2, 4, 8}) b->Args({1, t});
  b->ArgNames({"parallel", "threads"})->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(BM_BestSplit)->Apply(modes);
BENCHMARK(BM_FitBagging)->Apply(modes);
BENCHMARK(BM_StackOof)->Apply(modes);

BENCHMARK_MAIN();
