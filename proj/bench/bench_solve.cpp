/*
Copyright 2026 The pipemap Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

// Serial reference enumeration against the OpenMP kernel on the jpeg preset.

#include <benchmark/benchmark.h>

#include "pipemap/io.hpp"
#include "pipemap/solver.hpp"
#include "pipemap/workbench.hpp"

namespace {

using namespace pipemap;

struct Instance {
    PipelineSpec spec;
    Platform platform;
    BicriteriaQuery query;
};

Instance instance(int p) {
    PlatformGenSpec gen;
    gen.seed = 7;
    gen.p = p;
    Instance in{jpeg_preset(), generate_platform(gen), {}};
    // loose enough that most mappings are feasible, so the tie-break path is exercised
    const SolveResult free_run = solve(in.spec, in.platform, BicriteriaQuery::min_latency(1e300));
    in.query = BicriteriaQuery::min_latency(1.5 * free_run.unconstrained_bound);
    return in;
}

void BM_SolveSerial(benchmark::State &state) {
    const Instance in = instance(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_serial(in.spec, in.platform, in.query));
    }
}

void BM_SolveParallel(benchmark::State &state) {
    const Instance in = instance(static_cast<int>(state.range(0)));
    const SolveOptions options{static_cast<int>(state.range(1))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve(in.spec, in.platform, in.query, options));
    }
}

} // namespace

BENCHMARK(BM_SolveSerial)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveParallel)
    ->ArgsProduct({{8, 10}, {1, 2, 4, 0}})
    ->ArgNames({"p", "threads"})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
