// Copyright 2026 The supou Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "supou/estimate.hpp"
#include "supou/sim.hpp"
#include "supou/stable.hpp"

using namespace supou;

namespace {

CharacteristicQuadruple heavy_model()
{
    CharacteristicQuadruple q;
    q.big_jumps = {1.5, 0.5, 0.5};
    q.small_jumps = {0.3, 0.5, 0.5};
    q.pi = {0.7, 1.0};
    q.a = centering_drift(q);
    return q;
}

void BM_StableSample(benchmark::State& state)
{
    RandomStream rng(1, 0);
    const StableParams p{1.5, 1.0, 0.5, 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(sample_stable(p, rng));
}
BENCHMARK(BM_StableSample);

void BM_GammaSample(benchmark::State& state)
{
    RandomStream rng(2, 0);
    for (auto _ : state) benchmark::DoNotOptimize(sample_gamma(0.7, 1.0, rng));
}
BENCHMARK(BM_GammaSample);

void BM_KernelAntiderivative(benchmark::State& state)
{
    const JumpAtom atom{0.7, -2.0, 1.3};
    double t = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernel_antiderivative(atom, t));
        t = t < 4096.0 ? t * 2.0 : 1.0;
    }
}
BENCHMARK(BM_KernelAntiderivative);

void BM_OuStep(benchmark::State& state)
{
    RandomStream rng(3, 0);
    OrnsteinUhlenbeck ou(1.3, 0.5, rng);
    for (auto _ : state) benchmark::DoNotOptimize(ou.step(0.5, rng));
}
BENCHMARK(BM_OuStep);

void BM_SimulatePath(benchmark::State& state)
{
    const auto q = heavy_model();
    const TimeGrid grid{1.0, 2.0, static_cast<int>(state.range(0))};
    SimOptions opts;
    opts.burn_in = 50.0;
    std::uint32_t index = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_path(q, grid, opts, 4, index++, 1u << 20));
}
BENCHMARK(BM_SimulatePath)->Arg(8)->Arg(11)->Arg(13)->Unit(benchmark::kMillisecond);

void BM_AccumulateMoments(benchmark::State& state)
{
    const TimeGrid grid{1.0, 2.0, 11};
    const auto times = grid.times();
    std::vector<double> q{0.3, 0.6, 0.9, 1.2};
    std::vector<double> xs(times.size(), 1.7);
    for (auto _ : state) {
        MomentAccumulator acc(times, q, 1024, 32, 1.5);
        for (std::uint32_t p = 0; p < 1024; ++p) acc.add(p, xs);
        benchmark::DoNotOptimize(acc.finalize());
    }
}
BENCHMARK(BM_AccumulateMoments)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
