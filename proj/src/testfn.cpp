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

#include "pksim/testfn.hpp"

#include <cmath>

#include "pksim/errors.hpp"

namespace pksim {

BumpFunction::BumpFunction(const GridSpec& grid, const Point& center, double radius)
    : grid_(grid), center_(center), radius_(radius) {
    if (!(radius > 0.0) || radius > 0.5 * grid.L) throw InvalidArgument("bump radius must be in (0, L/2]");
}

Point BumpFunction::offset(const Point& x) const {
    Point y{};
    for (int a = 0; a < grid_.dim; ++a) {
        double d = x[a] - center_[a];
        d -= grid_.L * std::round(d / grid_.L);
        y[a] = d / radius_;
    }
    return y;
}

double BumpFunction::value(const Point& x) const {
    const Point y = offset(x);
    const double q = y[0] * y[0] + y[1] * y[1];
    if (q >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - q));
}

Point BumpFunction::grad(const Point& x) const {
    const Point y = offset(x);
    const double q = y[0] * y[0] + y[1] * y[1];
    Point g{};
    if (q >= 1.0) return g;
    const double v = std::exp(1.0 - 1.0 / (1.0 - q));
    const double gp = -1.0 / ((1.0 - q) * (1.0 - q));
    for (int a = 0; a < grid_.dim; ++a) g[a] = v * gp * 2.0 * y[a] / radius_;
    return g;
}

double BumpFunction::laplacian(const Point& x) const {
    const Point y = offset(x);
    const double q = y[0] * y[0] + y[1] * y[1];
    if (q >= 1.0) return 0.0;
    const double v = std::exp(1.0 - 1.0 / (1.0 - q));
    const double u = 1.0 - q;
    const double gp = -1.0 / (u * u);
    const double gpp = -2.0 / (u * u * u);
    const double R2 = radius_ * radius_;
    return v * ((gp * gp + gpp) * 4.0 * q / R2 + gp * 2.0 * grid_.dim / R2);
}

double pair_density(const Field& density, const Observable& phi) {
    double s = 0.0;
    for (std::size_t m = 0; m < density.values.size(); ++m)
        s += phi(density.grid.node(m)) * density.values[m];
    return s * density.grid.cell_volume();
}

} // namespace pksim
