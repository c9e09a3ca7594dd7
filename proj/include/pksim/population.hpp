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

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "pksim/lineage.hpp"

namespace pksim {

inline constexpr int kMaxDim = 2;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// A point of R^d with d <= kMaxDim; unused trailing coordinates stay zero.
using Point = std::array<double, kMaxDim>;

double norm(const Point& p, int dim);
double distance(const Point& a, const Point& b, int dim);

// One entry of the population array. An empty position is the dead marker.
struct CellRecord {
    std::optional<Point> position;
    double birth_time = 0.0;
    double death_time = kInfinity;

    bool alive() const { return position.has_value(); }
};

// Snapshot of the population array at one time. Only recorded indices are
// stored; every other index is implicitly dead.
class PopulationState {
public:
    using Map = std::map<LineageIndex, CellRecord>;

    PopulationState(int dim, double time);

    int dim() const { return dim_; }
    double time() const { return time_; }
    const Map& cells() const { return cells_; }

    // Rejects birth_time >= death_time and positions set outside the lifetime.
    void set(const LineageIndex& idx, const CellRecord& rec);
    const CellRecord* find(const LineageIndex& idx) const;

    std::size_t live_count() const;
    void compact();
    PopulationState restricted_to_line(std::uint32_t line) const;

private:
    int dim_;
    double time_;
    Map cells_;
};

// max over the union of indices; |x - dead| = 1, |dead - dead| = 0.
double state_distance(const PopulationState& a, const PopulationState& b);

struct Atom {
    Point position{};
    double weight = 0.0;
};

class EmpiricalMeasure {
public:
    explicit EmpiricalMeasure(int dim) : dim_(dim) {}
    EmpiricalMeasure(int dim, std::vector<Atom> atoms);

    int dim() const { return dim_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }

    void add(const Point& x, double weight);
    double total_mass() const;

private:
    int dim_;
    std::vector<Atom> atoms_;
};

// One atom of weight 1/n0 per live cell, in LineageIndex order.
EmpiricalMeasure empirical(const PopulationState& pop, std::uint64_t n0);

template <class F>
double integrate(const EmpiricalMeasure& measure, F&& phi) {
    double acc = 0.0;
    for (const auto& a : measure.atoms()) acc += a.weight * phi(a.position);
    return acc;
}

} // namespace pksim
