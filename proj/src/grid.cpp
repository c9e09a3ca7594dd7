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

#include "pksim/grid.hpp"

#include <algorithm>
#include <cmath>

#include "pksim/errors.hpp"

namespace pksim {

Point GridSpec::node(std::size_t flat) const {
    Point p{};
    if (dim == 1) {
        p[0] = double(flat) * h();
    } else {
        p[0] = double(flat / std::size_t(n)) * h();
        p[1] = double(flat % std::size_t(n)) * h();
    }
    return p;
}

Point GridSpec::wrap(Point x) const {
    for (int a = 0; a < dim; ++a) {
        x[a] -= L * std::floor(x[a] / L);
        if (x[a] >= L) x[a] -= L;   // rounding of tiny negatives
    }
    return x;
}

void GridSpec::validate() const {
    if (dim != 1 && dim != 2) throw InvalidArgument("grid dimension must be 1 or 2");
    if (n < 4 || n > 4096 || (n & (n - 1)) != 0)
        throw InvalidArgument("grid.n must be a power of two in [4, 4096]");
    if (!(L > 0.0) || !std::isfinite(L)) throw InvalidArgument("grid.L must be positive");
}

Field::Field(const GridSpec& g, std::vector<double> v, double t)
    : grid(g), values(std::move(v)), time(t) {
    if (values.size() != grid.size()) throw GridMismatch("value count does not match grid");
}

double Field::mean() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s / double(values.size());
}

double Field::sup_norm() const {
    double s = 0.0;
    for (double v : values) s = std::max(s, std::abs(v));
    return s;
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
    if (!(a == b)) throw GridMismatch(what);
}

} // namespace pksim
