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

#include <cmath>
#include <cstddef>
#include <vector>

#include "pksim/population.hpp"

namespace pksim {

// Periodic torus [0, L)^d sampled by n nodes per axis. Node (i0, i1) sits at
// (i0 h, i1 h) and is stored row-major with axis 0 slowest.
struct GridSpec {
    int dim = 1;
    int n = 64;
    double L = 1.0;

    double h() const { return L / n; }
    std::size_t size() const { return dim == 1 ? std::size_t(n) : std::size_t(n) * std::size_t(n); }
    double cell_volume() const { return std::pow(h(), dim); }
    Point node(std::size_t flat) const;
    Point wrap(Point x) const;

    // Throws InvalidArgument unless dim in {1,2}, n a power of two >= 4, L > 0.
    void validate() const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Grid samples of a scalar field at one time.
struct Field {
    GridSpec grid;
    std::vector<double> values;
    double time = 0.0;

    Field() = default;
    Field(const GridSpec& g, double t = 0.0) : grid(g), values(g.size(), 0.0), time(t) {}
    Field(const GridSpec& g, std::vector<double> v, double t);

    double mean() const;
    double sup_norm() const;
    double integral() const { return mean() * std::pow(grid.L, grid.dim); }
};

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

} // namespace pksim
