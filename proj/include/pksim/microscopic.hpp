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
#include <optional>
#include <vector>

#include "pksim/field.hpp"
#include "pksim/field_path.hpp"
#include "pksim/model.hpp"
#include "pksim/noise.hpp"
#include "pksim/population.hpp"

namespace pksim {

// Life of one cell. positions[m] is the position at grid time
// (first_step + m) dt. For a cell that has died, positions.back() is the
// position at which the death or division happened.
struct CellPath {
    LineageIndex id;
    double birth = 0.0;
    double death = kInfinity;
    int first_step = 0;
    std::vector<Point> positions;

    bool alive_at(double t) const { return birth <= t && t < death; }
    const Point& position_at_step(int m) const;
    const Point& birth_position() const { return positions.front(); }
    const Point& last_position() const { return positions.back(); }
};

enum class EventKind { Branch, Death };

struct CellEvent {
    double time = 0.0;
    LineageIndex id;
    EventKind kind = EventKind::Branch;
    Point position{};
};

// Output of the branching simulators: full genealogy in LineageIndex order,
// the event log in global time order and optionally the field at every step.
struct BranchingTrajectory {
    int dim = 1;
    double dt = 0.0;
    int steps = 0;
    std::uint64_t n0 = 1;            // normalisation of the empirical measure
    std::vector<std::uint32_t> lines;
    std::vector<CellPath> cells;
    std::vector<CellEvent> events;
    std::vector<std::size_t> live_counts;   // at t_k, k = 0..steps
    std::size_t max_live = 0;               // over all times, including between steps
    std::optional<FieldPath> field;

    double time_at(int step) const { return dt * step; }
    PopulationState state_at_step(int step) const;
    PopulationState state_at(double t) const;
    EmpiricalMeasure measure_at_step(int step) const;
    const CellPath* find(const LineageIndex& id) const;
};
using MicroTrajectory = BranchingTrajectory;

struct SimulationOptions {
    bool record_field = true;
    bool keep_dead = true;     // false drops records of dead cells as they die
    bool parallel = true;      // false runs the serial reference kernels
};

// Per-step driver shared by the microscopic and hybrid models. Each step:
//   1. the field at the start of the step is frozen,
//   2. every live cell moves by one Euler-Maruyama step,
//   3. clock events inside the step are applied in global time order using
//      the end-of-step positions and the frozen field,
// after which the caller advances the field.
class BranchingEngine {
public:
    BranchingEngine(const ModelParams& params, const NoiseUniverse& noise,
                    const std::vector<std::uint32_t>& lines, const SimulationOptions& options);

    void step(int k, const FieldInterpolant& rho);

    std::size_t live_count() const { return live_.size(); }
    std::size_t max_live() const { return max_live_; }
    // Live cells at the current grid time, weight per atom, LineageIndex order.
    EmpiricalMeasure live_measure(double weight) const;
    BranchingTrajectory finish(std::uint64_t n0, int steps) &&;

private:
    void spawn(const LineageIndex& id, double birth, int first_step, const Point& x);

    const ModelParams& params_;
    const NoiseUniverse& noise_;
    SimulationOptions options_;
    std::vector<std::uint32_t> lines_;
    std::vector<CellPath> cells_;
    std::vector<ClockCursor> clocks_;
    std::vector<std::size_t> live_;
    std::vector<CellEvent> events_;
    std::vector<std::size_t> live_counts_;
    std::size_t max_live_ = 0;
};

// Individual-based model with n0 founder lines coupled to the field.
MicroTrajectory simulate_microscopic(const ModelParams& params, std::uint64_t n0,
                                     const NoiseUniverse& noise,
                                     const SimulationOptions& options = {});

// Sub-population of one founder line. Throws NoSuchLine.
BranchingTrajectory lineage_restriction(const BranchingTrajectory& traj, std::uint32_t line);

} // namespace pksim
