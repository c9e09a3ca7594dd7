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

#include "pksim/microscopic.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "pksim/errors.hpp"
#include "pksim/kernels.hpp"

namespace pksim {

const Point& CellPath::position_at_step(int m) const {
    const int last = int(positions.size()) - 1;
    return positions[std::size_t(std::clamp(m, 0, last))];
}

namespace {

int step_of(double t, double dt) { return int(std::floor(t / dt + 1e-9)); }

bool rates_need_field(const ModelParams& p) {
    auto uses = [](const RateFn& f) { return std::holds_alternative<LogisticRate>(f.variant()); };
    return uses(p.birth) || uses(p.death);
}

} // namespace

PopulationState BranchingTrajectory::state_at(double t) const {
    PopulationState s(dim, t);
    const int k = step_of(t, dt);
    for (const auto& c : cells) {
        if (c.birth > t) continue;
        CellRecord rec;
        rec.birth_time = c.birth;
        rec.death_time = c.death;
        if (c.alive_at(t)) rec.position = c.position_at_step(k - c.first_step);
        s.set(c.id, rec);
    }
    return s;
}

PopulationState BranchingTrajectory::state_at_step(int step) const {
    return state_at(time_at(step));
}

EmpiricalMeasure BranchingTrajectory::measure_at_step(int step) const {
    const double t = time_at(step);
    const double w = 1.0 / double(n0);
    EmpiricalMeasure m(dim);
    for (const auto& c : cells)
        if (c.alive_at(t)) m.add(c.position_at_step(step - c.first_step), w);
    return m;
}

const CellPath* BranchingTrajectory::find(const LineageIndex& id) const {
    auto it = std::lower_bound(cells.begin(), cells.end(), id,
                               [](const CellPath& c, const LineageIndex& v) { return c.id < v; });
    return (it != cells.end() && it->id == id) ? &*it : nullptr;
}

BranchingEngine::BranchingEngine(const ModelParams& params, const NoiseUniverse& noise,
                                 const std::vector<std::uint32_t>& lines,
                                 const SimulationOptions& options)
    : params_(params), noise_(noise), options_(options), lines_(lines) {
    if (noise.dim() != params.grid.dim) throw DimensionMismatch("noise universe and grid");
    if (lines.size() > params.population_cap)
        throw PopulationExplosion("initial population exceeds the cap");
    cells_.reserve(lines.size());
    clocks_.reserve(lines.size());
    for (std::uint32_t line : lines) {
        const Point x = sample_founder(params.mu0, params.grid, noise, line);
        spawn(LineageIndex::root(line), 0.0, 0, x);
    }
    std::sort(live_.begin(), live_.end(),
              [&](std::size_t a, std::size_t b) { return cells_[a].id < cells_[b].id; });
    max_live_ = live_.size();
    live_counts_.push_back(live_.size());
}

void BranchingEngine::spawn(const LineageIndex& id, double birth, int first_step, const Point& x) {
    CellPath c;
    c.id = id;
    c.birth = birth;
    c.first_step = first_step;
    c.positions.push_back(x);
    cells_.push_back(std::move(c));
    clocks_.push_back(noise_.clock(id, params_.lambda_bar));
    clocks_.back().skip_to(birth);
    live_.push_back(cells_.size() - 1);
}

void BranchingEngine::step(int k, const FieldInterpolant& rho) {
    const double dt = params_.dt;
    const double t0 = dt * k;
    const double t1 = dt * (k + 1);
    const int dim = params_.grid.dim;

    // Move.
    const std::size_t n = live_.size();
    std::vector<LineageIndex> ids(n);
    std::vector<Point> pos(n), out(n);
    for (std::size_t i = 0; i < n; ++i) {
        ids[i] = cells_[live_[i]].id;
        pos[i] = cells_[live_[i]].positions.back();
    }
    kernels::MoveContext ctx;
    ctx.rho = &rho;
    ctx.drift = &params_.drift;
    ctx.noise = &noise_;
    ctx.sigma = params_.sigma;
    ctx.dt = dt;
    ctx.step = std::uint64_t(k);
    if (options_.parallel)
        kernels::move_omp(ids, pos, out, ctx);
    else
        kernels::move_serial(ids, pos, out, ctx);
    for (std::size_t i = 0; i < n; ++i) {
        for (int a = 0; a < dim; ++a)
            if (!std::isfinite(out[i][a])) throw NonFiniteState("cell position " + to_string(ids[i]));
        cells_[live_[i]].positions.push_back(out[i]);
    }

    // Events in [t0, t1), global time order.
    using Entry = std::pair<double, LineageIndex>;
    struct Pending {
        double time;
        LineageIndex id;
        std::size_t cell;
        bool operator>(const Pending& o) const {
            return Entry{time, id} > Entry{o.time, o.id};
        }
    };
    std::priority_queue<Pending, std::vector<Pending>, std::greater<>> heap;
    auto schedule = [&](std::size_t c) {
        ClockCursor& clk = clocks_[c];
        while (clk.time() < t0) clk.advance();
        if (clk.time() < t1) heap.push({clk.time(), cells_[c].id, c});
    };
    for (std::size_t c : live_) schedule(c);

    const bool need_field = rates_need_field(params_);
    std::vector<std::size_t> born;
    std::vector<std::size_t> dead;
    while (!heap.empty()) {
        const Pending ev = heap.top();
        heap.pop();
        const Point x = params_.grid.wrap(cells_[ev.cell].positions.back());
        double s = 0.0;
        if (need_field) {
            double v;
            Point g;
            rho.eval_both(x, v, g);
            s = rate_argument(params_.lambda_arg, v, g, dim);
        }
        const double lb = params_.birth(x, s);
        const double ld = params_.death(x, s);
        const double z = clocks_[ev.cell].mark();
        if (z <= lb || z <= lb + ld) {
            const bool branch = z <= lb;
            CellPath& mother = cells_[ev.cell];
            mother.death = ev.time;
            const Point at = mother.positions.back();
            events_.push_back({ev.time, ev.id, branch ? EventKind::Branch : EventKind::Death, at});
            dead.push_back(ev.cell);
            if (branch) {
                const auto [c0, c1] = ev.id.children();
                for (const auto& child : {c0, c1}) {
                    spawn(child, ev.time, k + 1, at);
                    born.push_back(cells_.size() - 1);
                    schedule(cells_.size() - 1);
                }
            }
            const std::size_t now = live_.size() - dead.size();
            max_live_ = std::max(max_live_, now);
            if (now > params_.population_cap)
                throw PopulationExplosion("live count " + std::to_string(now) + " exceeds cap " +
                                          std::to_string(params_.population_cap));
        } else {
            clocks_[ev.cell].advance();
            schedule(ev.cell);
        }
    }

    if (!dead.empty()) {
        std::sort(dead.begin(), dead.end());
        std::erase_if(live_, [&](std::size_t c) { return std::binary_search(dead.begin(), dead.end(), c); });
        std::sort(live_.begin(), live_.end(),
                  [&](std::size_t a, std::size_t b) { return cells_[a].id < cells_[b].id; });
        if (!options_.keep_dead) {
            std::vector<CellPath> cells;
            std::vector<ClockCursor> clocks;
            cells.reserve(live_.size());
            clocks.reserve(live_.size());
            for (std::size_t& c : live_) {
                cells.push_back(std::move(cells_[c]));
                clocks.push_back(clocks_[c]);
                c = cells.size() - 1;
            }
            cells_ = std::move(cells);
            clocks_ = std::move(clocks);
        }
    }
    live_counts_.push_back(live_.size());
}

EmpiricalMeasure BranchingEngine::live_measure(double weight) const {
    EmpiricalMeasure m(params_.grid.dim);
    for (std::size_t c : live_) m.add(cells_[c].positions.back(), weight);
    return m;
}

BranchingTrajectory BranchingEngine::finish(std::uint64_t n0, int steps) && {
    BranchingTrajectory t;
    t.dim = params_.grid.dim;
    t.dt = params_.dt;
    t.steps = steps;
    t.n0 = n0;
    t.lines = std::move(lines_);
    t.cells = std::move(cells_);
    std::sort(t.cells.begin(), t.cells.end(),
              [](const CellPath& a, const CellPath& b) { return a.id < b.id; });
    t.events = std::move(events_);
    t.live_counts = std::move(live_counts_);
    t.max_live = max_live_;
    return t;
}

MicroTrajectory simulate_microscopic(const ModelParams& params, std::uint64_t n0,
                                     const NoiseUniverse& noise, const SimulationOptions& options) {
    params.validate();
    if (n0 == 0) throw InvalidArgument("n0 must be positive");
    std::vector<std::uint32_t> lines(n0);
    for (std::uint64_t i = 0; i < n0; ++i) lines[i] = std::uint32_t(i + 1);
    BranchingEngine engine(params, noise, lines, options);
    const Kernel kernel = params.kernel();
    const int steps = params.steps();
    Field rho = initial_field(params.rho0, params.grid);
    FieldPath path(params.grid, params.dt);
    if (options.record_field) {
        path.reserve(std::size_t(steps) + 1);
        path.push(rho);
    }
    const double w = 1.0 / double(n0);
    for (int k = 0; k < steps; ++k) {
        const FieldInterpolant interp(rho);
        engine.step(k, interp);
        const double t1 = params.dt * (k + 1);
        if (params.alpha == 0.0) {
            rho = free_step(rho, params.dt, params.D, params.r);
        } else {
            const Field src = options.parallel ? deposit(engine.live_measure(w), kernel, t1)
                                               : kernels::deposit_serial(engine.live_measure(w), kernel, t1);
            rho = semigroup_step(rho, src, params.dt, params.D, params.r, params.alpha);
        }
        rho.time = t1;
        if (options.record_field) path.push(rho);
    }
    auto traj = std::move(engine).finish(n0, steps);
    if (options.record_field) traj.field = std::move(path);
    return traj;
}

BranchingTrajectory lineage_restriction(const BranchingTrajectory& traj, std::uint32_t line) {
    if (std::find(traj.lines.begin(), traj.lines.end(), line) == traj.lines.end())
        throw NoSuchLine("line " + std::to_string(line));
    BranchingTrajectory out;
    out.dim = traj.dim;
    out.dt = traj.dt;
    out.steps = traj.steps;
    out.n0 = traj.n0;
    out.lines = {line};
    out.field = traj.field;
    for (const auto& c : traj.cells)
        if (c.id.line() == line) out.cells.push_back(c);
    for (const auto& e : traj.events)
        if (e.id.line() == line) out.events.push_back(e);
    out.live_counts.assign(std::size_t(traj.steps) + 1, 0);
    for (const auto& c : out.cells)
        for (int k = 0; k <= traj.steps; ++k)
            if (c.alive_at(out.time_at(k))) ++out.live_counts[std::size_t(k)];
    std::size_t live = 0, best = 0;
    for (const auto& c : out.cells)
        if (c.birth == 0.0) ++live;
    best = live;
    for (const auto& e : out.events) {
        live = e.kind == EventKind::Branch ? live + 1 : live - 1;
        best = std::max(best, live);
    }
    out.max_live = best;
    return out;
}

} // namespace pksim
