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

#pragma once

#include <cstdint>
#include <span>

#include "pksim/field.hpp"
#include "pksim/model.hpp"
#include "pksim/noise.hpp"

// Hot loops of the simulators. Each kernel has a plain serial reference used
// by the tests and an OpenMP version used by the simulators. The OpenMP
// versions produce the same bits for any thread count.
namespace pksim::kernels {

// Straight left-to-right sum over atoms.
Field deposit_serial(const EmpiricalMeasure& measure, const Kernel& kernel, double time);

// Atoms are split into chunks whose size depends only on the atom count, each
// chunk is deposited into its own buffer, and buffers are combined by a fixed
// pairwise tree.
Field deposit_omp(const EmpiricalMeasure& measure, const Kernel& kernel, double time);

std::size_t deposit_chunk_size(std::size_t atoms);

// Euler-Maruyama move of independent particles over step `step`:
//   x += b(x, grad rho(x)) dt + sigma dW_{id}.
struct MoveContext {
    const FieldInterpolant* rho = nullptr;
    const DriftFn* drift = nullptr;
    const NoiseUniverse* noise = nullptr;
    double sigma = 1.0;
    double dt = 0.01;
    std::uint64_t step = 0;
    Purpose purpose = Purpose::Wiener;
};

// positions[i] is advanced using the stream of ids[i]; results are written
// to out[i] (which may alias positions).
void move_serial(std::span<const LineageIndex> ids, std::span<const Point> positions,
                 std::span<Point> out, const MoveContext& ctx);
void move_omp(std::span<const LineageIndex> ids, std::span<const Point> positions,
              std::span<Point> out, const MoveContext& ctx);

} // namespace pksim::kernels
