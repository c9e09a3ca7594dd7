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

#include "pksim/population.hpp"

#include <algorithm>
#include <cmath>

#include "pksim/errors.hpp"

namespace pksim {

double norm(const Point& p, int dim) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += p[a] * p[a];
    return std::sqrt(s);
}

double distance(const Point& a, const Point& b, int dim) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
}

PopulationState::PopulationState(int dim, double time) : dim_(dim), time_(time) {
    if (dim < 1 || dim > kMaxDim) throw InvalidArgument("dimension must be 1 or 2");
}

void PopulationState::set(const LineageIndex& idx, const CellRecord& rec) {
    if (std::isfinite(rec.death_time) && !(rec.birth_time < rec.death_time))
        throw InvalidArgument("birth time must precede death time for " + to_string(idx));
    const bool inside = rec.birth_time <= time_ && time_ < rec.death_time;
    if (rec.alive() != inside)
        throw InvalidArgument("position of " + to_string(idx) +
                              " inconsistent with its lifetime at t = " + std::to_string(time_));
    cells_[idx] = rec;
}

const CellRecord* PopulationState::find(const LineageIndex& idx) const {
    auto it = cells_.find(idx);
    return it == cells_.end() ? nullptr : &it->second;
}

std::size_t PopulationState::live_count() const {
    return std::size_t(std::count_if(cells_.begin(), cells_.end(),
                                      [](const auto& kv) { return kv.second.alive(); }));
}

void PopulationState::compact() {
    std::erase_if(cells_, [](const auto& kv) { return !kv.second.alive(); });
}

PopulationState PopulationState::restricted_to_line(std::uint32_t line) const {
    PopulationState out(dim_, time_);
    for (const auto& [idx, rec] : cells_)
        if (idx.line() == line) out.cells_.emplace(idx, rec);
    return out;
}

double state_distance(const PopulationState& a, const PopulationState& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch(std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
    const int d = a.dim();
    auto term = [d](const CellRecord* x, const CellRecord* y) {
        const bool ax = x && x->alive();
        const bool ay = y && y->alive();
        if (ax && ay) return distance(*x->position, *y->position, d);
        return ax == ay ? 0.0 : 1.0;
    };
    // Merge walk over the two ordered maps.
    double best = 0.0;
    auto ia = a.cells().begin();
    auto ib = b.cells().begin();
    while (ia != a.cells().end() || ib != b.cells().end()) {
        if (ib == b.cells().end() || (ia != a.cells().end() && ia->first < ib->first)) {
            best = std::max(best, term(&ia->second, nullptr));
            ++ia;
        } else if (ia == a.cells().end() || ib->first < ia->first) {
            best = std::max(best, term(nullptr, &ib->second));
            ++ib;
        } else {
            best = std::max(best, term(&ia->second, &ib->second));
            ++ia;
            ++ib;
        }
    }
    return best;
}

EmpiricalMeasure::EmpiricalMeasure(int dim, std::vector<Atom> atoms)
    : dim_(dim), atoms_(std::move(atoms)) {}

void EmpiricalMeasure::add(const Point& x, double weight) { atoms_.push_back({x, weight}); }

double EmpiricalMeasure::total_mass() const {
    double m = 0.0;
    for (const auto& a : atoms_) m += a.weight;
    return m;
}

EmpiricalMeasure empirical(const PopulationState& pop, std::uint64_t n0) {
    if (n0 == 0) throw InvalidArgument("n0 must be positive");
    EmpiricalMeasure m(pop.dim());
    const double w = 1.0 / double(n0);
    for (const auto& [idx, rec] : pop.cells())
        if (rec.alive()) m.add(*rec.position, w);
    return m;
}

} // namespace pksim
