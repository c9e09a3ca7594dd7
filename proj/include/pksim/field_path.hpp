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

#include <cstddef>
#include <vector>

#include "pksim/field.hpp"

namespace pksim {

// A field sampled at t_k = k dt, k = 0..steps. Queries between slices are
// linearly interpolated in time; queries on a slice return it unchanged.
class FieldPath {
public:
    FieldPath() = default;
    FieldPath(const GridSpec& grid, double dt) : grid_(grid), dt_(dt) {}

    void push(Field f) { slices_.push_back(std::move(f)); }
    void reserve(std::size_t n) { slices_.reserve(n); }

    const GridSpec& grid() const { return grid_; }
    double dt() const { return dt_; }
    std::size_t size() const { return slices_.size(); }
    bool empty() const { return slices_.empty(); }
    double end_time() const { return dt_ * double(slices_.size() - 1); }

    const Field& slice(std::size_t k) const { return slices_.at(k); }
    const Field& back() const { return slices_.back(); }
    const std::vector<Field>& slices() const { return slices_; }

    Field at(double t) const;

private:
    GridSpec grid_;
    double dt_ = 0.0;
    std::vector<Field> slices_;
};

// Interpolants of a field path on a simulation time grid with step dt,
// prepared once and shared read-only between threads.
class PathInterpolants {
public:
    PathInterpolants(const FieldPath& path, double dt, int steps);
    const FieldInterpolant& at_step(int k) const { return interp_.at(std::size_t(k)); }
    int steps() const { return int(interp_.size()) - 1; }

private:
    std::vector<FieldInterpolant> interp_;
};

} // namespace pksim
