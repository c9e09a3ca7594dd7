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

#include <functional>
#include <vector>

#include "pksim/field.hpp"
#include "pksim/grid.hpp"
#include "pksim/population.hpp"

namespace pksim {

// Smooth compactly supported bump exp(1 - 1/(1 - |y|^2)), y = (x - c)/radius,
// on the torus (minimum image). Peak value 1 at the centre.
class BumpFunction {
public:
    BumpFunction(const GridSpec& grid, const Point& center, double radius);

    double value(const Point& x) const;
    Point grad(const Point& x) const;
    double laplacian(const Point& x) const;

    const Point& center() const { return center_; }
    double radius() const { return radius_; }

private:
    Point offset(const Point& x) const;

    GridSpec grid_;
    Point center_;
    double radius_;
};

using Observable = std::function<double(const Point&)>;

// <phi, p> for a grid density: h^d sum_nodes phi(node) p(node).
double pair_density(const Field& density, const Observable& phi);

} // namespace pksim
