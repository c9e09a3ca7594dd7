/*
   Copyright 2026 The pksim Authors

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


// Serial reference vs OpenMP kernels. The two should produce identical bits;
// this only measures time.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "pksim/kernels.hpp"

using namespace pksim;

namespace {

const GridSpec kGrid{1, 256, 10.0};

EmpiricalMeasure cloud(std::size_t atoms) {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> pos(0.0, kGrid.L);
    EmpiricalMeasure m(1);
    for (std::size_t i = 0; i < atoms; ++i) m.add({pos(gen), 0.0}, 1.0 / double(atoms));
    return m;
}

template <Field (*Deposit)(const EmpiricalMeasure&, const Kernel&, double)>
void BM_deposit(benchmark::State& state) {
    const auto m = cloud(std::size_t(state.range(0)));
    const auto kernel = Kernel::with_width_cells(kGrid, 4.0);
    for (auto _ : state) benchmark::DoNotOptimize(Deposit(m, kernel, 0.0));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <void (*Move)(std::span<const LineageIndex>, std::span<const Point>, std::span<Point>,
                       const kernels::MoveContext&)>
void BM_move(benchmark::State& state) {
    const std::size_t n = std::size_t(state.range(0));
    const auto m = cloud(n);
    std::vector<LineageIndex> ids;
    std::vector<Point> pos, out(n);
    for (std::size_t i = 0; i < n; ++i) {
        ids.push_back(LineageIndex::root(std::uint32_t(i + 1)));
        pos.push_back(m.atoms()[i].position);
    }
    Field f(kGrid);
    for (std::size_t i = 0; i < kGrid.size(); ++i) f.values[i] = 0.3 + 0.2 * std::sin(kGrid.node(i)[0]);
    const FieldInterpolant rho(f);
    const DriftFn drift(ChemotaxisDrift{2.0, 1.0});
    const NoiseUniverse noise(7, 1);
    kernels::MoveContext ctx{&rho, &drift, &noise, 1.0, 0.01, 0, Purpose::Wiener};
    for (auto _ : state) {
        Move(ids, pos, out, ctx);
        benchmark::DoNotOptimize(out.data());
        ++ctx.step;
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

} // namespace

BENCHMARK(BM_deposit<kernels::deposit_serial>)->Name("deposit/serial")->Arg(1 << 10)->Arg(1 << 14);
BENCHMARK(BM_deposit<kernels::deposit_omp>)->Name("deposit/omp")->Arg(1 << 10)->Arg(1 << 14);
BENCHMARK(BM_move<kernels::move_serial>)->Name("move/serial")->Arg(1 << 10)->Arg(1 << 14);
BENCHMARK(BM_move<kernels::move_omp>)->Name("move/omp")->Arg(1 << 10)->Arg(1 << 14);

BENCHMARK_MAIN();
