// Copyright 2026 The qwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "benchmark/benchmark.h"
#include "qwalk/experiments.h"
#include "qwalk/walk.h"

using namespace qwalk;

namespace {

ExperimentSpec walk_of(int n) {
    ExperimentSpec spec;
    spec.walk = WalkConfig::uniform(n);
    return spec;
}

void BM_walk_unitary(benchmark::State &state) {
    const auto walk = WalkConfig::uniform(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(walk_unitary(walk));
    }
}
BENCHMARK(BM_walk_unitary)->Arg(3)->Arg(11);

void BM_one_fold(benchmark::State &state) {
    const auto spec = walk_of(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_one_fold(spec));
    }
}
BENCHMARK(BM_one_fold)->Arg(11);

void BM_two_fold(benchmark::State &state) {
    auto spec = walk_of(static_cast<int>(state.range(0)));
    spec.heralded = state.range(1) != 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_two_fold(spec));
    }
}
BENCHMARK(BM_two_fold)->Args({11, 1})->Args({11, 0});

void BM_three_fold(benchmark::State &state) {
    const auto spec = walk_of(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_three_fold_partial(spec));
    }
}
BENCHMARK(BM_three_fold)->Arg(11);

void BM_step_evolution(benchmark::State &state) {
    const auto spec = walk_of(11);
    for (auto _ : state) {
        benchmark::DoNotOptimize(step_evolution(spec, 11));
    }
}
BENCHMARK(BM_step_evolution);

void BM_fit_overlap(benchmark::State &state) {
    const ExperimentSpec spec;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_overlap(spec));
    }
}
BENCHMARK(BM_fit_overlap)->Unit(benchmark::kMillisecond);

void BM_oracle_two_fold(benchmark::State &state) {
    auto spec = walk_of(static_cast<int>(state.range(0)));
    spec.mu_alpha = 0.3;
    spec.oracle_cutoff = static_cast<int>(state.range(1));
    const auto points = scan_points(spec, ExperimentKind::TwoFold);
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate_points(spec, points, Engine::FockOracle));
    }
}
BENCHMARK(BM_oracle_two_fold)->Args({2, 10})->Args({3, 12})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
