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

#include "pksim/field_path.hpp"

#include <algorithm>
#include <cmath>

#include "pksim/errors.hpp"

namespace pksim {

Field FieldPath::at(double t) const {
    if (slices_.empty()) throw InvalidArgument("empty field path");
    const double u = t / dt_;
    const double k = std::round(u);
    const double last = double(slices_.size() - 1);
    if (!(t >= -1e-12 * dt_) || u > last + 1e-9) throw InvalidArgument("field path queried outside its span");
    if (std::abs(u - k) <= 1e-9) return slices_[std::size_t(std::clamp(k, 0.0, last))];
    const auto k0 = std::size_t(std::floor(u));
    const double th = u - double(k0);
    const Field& a = slices_[k0];
    const Field& b = slices_[k0 + 1];
    Field f(grid_, t);
    for (std::size_t m = 0; m < f.values.size(); ++m)
        f.values[m] = (1.0 - th) * a.values[m] + th * b.values[m];
    return f;
}

PathInterpolants::PathInterpolants(const FieldPath& path, double dt, int steps) {
    interp_.reserve(std::size_t(steps) + 1);
    for (int k = 0; k <= steps; ++k) interp_.emplace_back(path.at(k * dt));
}

} // namespace pksim
