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

#include "pksim/meanfield.hpp"

#include <algorithm>
#include <cmath>

#include "pksim/errors.hpp"
#include "pksim/kernels.hpp"
#include "pksim/macroscopic.hpp"

namespace pksim {

SampleStats MeanMeasurePath::pairing(std::size_t k, const Observable& phi) const {
    const auto& atoms = at_step(k).atoms();
    std::vector<double> v(atoms.size());
    const double K = double(replicas_);
    for (std::size_t i = 0; i < atoms.size(); ++i) v[i] = K * atoms[i].weight * phi(atoms[i].position);
    return summarize(v);
}

BranchingTrajectory simulate_hybrid(const ModelParams& params, const PathInterpolants& rho,
                                    const NoiseUniverse& noise, std::uint32_t line,
                                    const SimulationOptions& options) {
    params.validate();
    const int steps = params.steps();
    if (rho.steps() < steps) throw InvalidArgument("field path shorter than the horizon");
    BranchingEngine engine(params, noise, {line}, options);
    for (int k = 0; k < steps; ++k) engine.step(k, rho.at_step(k));
    return std::move(engine).finish(1, steps);
}

BranchingTrajectory simulate_hybrid(const ModelParams& params, const FieldPath& rho,
                                    const NoiseUniverse& noise, std::uint32_t line,
                                    const SimulationOptions& options) {
    const PathInterpolants interp(rho, params.dt, params.steps());
    auto traj = simulate_hybrid(params, interp, noise, line, options);
    if (options.record_field) traj.field = rho;
    return traj;
}

MassParticlePath simulate_mass_particle(const ModelParams& params, const PathInterpolants& rho,
                                        const NoiseUniverse& noise, std::uint64_t replica) {
    const int steps = params.steps();
    const int dim = params.grid.dim;
    const auto line = std::uint32_t(replica + 1);
    const LineageIndex id = LineageIndex::root(line);
    const bool need_field = std::holds_alternative<LogisticRate>(params.birth.variant()) ||
                            std::holds_alternative<LogisticRate>(params.death.variant());
    MassParticlePath path;
    path.X.reserve(std::size_t(steps) + 1);
    path.M.reserve(std::size_t(steps) + 1);
    path.X.push_back(sample_founder(params.mu0, params.grid, noise, line, Purpose::MassInit));
    path.M.push_back(1.0);
    kernels::MoveContext ctx;
    ctx.drift = &params.drift;
    ctx.noise = &noise;
    ctx.sigma = params.sigma;
    ctx.dt = params.dt;
    ctx.purpose = Purpose::MassWiener;
    for (int k = 0; k < steps; ++k) {
        const FieldInterpolant& f = rho.at_step(k);
        ctx.rho = &f;
        ctx.step = std::uint64_t(k);
        Point next;
        kernels::move_serial({&id, 1}, {&path.X.back(), 1}, {&next, 1}, ctx);
        for (int a = 0; a < dim; ++a)
            if (!std::isfinite(next[a])) throw NonFiniteState("mass particle position");
        const Point xw = params.grid.wrap(next);
        double s = 0.0;
        if (need_field) {
            double v;
            Point g;
            f.eval_both(xw, v, g);
            s = rate_argument(params.lambda_arg, v, g, dim);
        }
        const double lam = params.net_rate(xw, s);
        path.M.push_back(path.M.back() * std::exp(lam * params.dt));
        path.X.push_back(next);
    }
    return path;
}

MassParticlePath simulate_mass_particle(const ModelParams& params, const FieldPath& rho,
                                        const NoiseUniverse& noise, std::uint64_t replica) {
    const PathInterpolants interp(rho, params.dt, params.steps());
    return simulate_mass_particle(params, interp, noise, replica);
}

std::vector<MassParticlePath> simulate_mass_ensemble(const ModelParams& params,
                                                     const FieldPath& rho,
                                                     const NoiseUniverse& noise,
                                                     std::size_t replicas, bool parallel) {
    params.validate();
    const PathInterpolants interp(rho, params.dt, params.steps());
    std::vector<MassParticlePath> out(replicas);
    const auto n = std::ptrdiff_t(replicas);
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
    for (std::ptrdiff_t r = 0; r < n; ++r)
        out[std::size_t(r)] = simulate_mass_particle(params, interp, noise, std::uint64_t(r));
    return out;
}

MeanMeasurePath estimate_mu(const std::vector<MassParticlePath>& ensemble, int dim, double dt) {
    if (ensemble.empty()) throw EmptyEnsemble("no mass particles");
    const std::size_t K = ensemble.size();
    const std::size_t steps = ensemble.front().X.size();
    MeanMeasurePath mu(dim, dt, K);
    for (std::size_t k = 0; k < steps; ++k) {
        EmpiricalMeasure m(dim);
        for (const auto& p : ensemble) m.add(p.X.at(k), p.M.at(k) / double(K));
        mu.push(std::move(m));
    }
    return mu;
}

FieldPath smooth_mu(const MeanMeasurePath& mu, const Kernel& kernel) {
    FieldPath out(kernel.grid(), mu.dt());
    out.reserve(mu.steps());
    for (std::size_t k = 0; k < mu.steps(); ++k)
        out.push(deposit(mu.at_step(k), kernel, mu.dt() * double(k)));
    return out;
}

FieldPath field_from_measures(const ModelParams& params, const Field& rho0,
                              const MeanMeasurePath& mu) {
    const Kernel kernel = params.kernel();
    const int steps = params.steps();
    if (mu.steps() < std::size_t(steps) + 1) throw InvalidArgument("measure path too short");
    FieldPath path(params.grid, params.dt);
    path.reserve(std::size_t(steps) + 1);
    Field rho = rho0;
    rho.time = 0.0;
    path.push(rho);
    for (int k = 0; k < steps; ++k) {
        const double t1 = params.dt * (k + 1);
        if (params.alpha == 0.0) {
            rho = free_step(rho, params.dt, params.D, params.r);
        } else {
            const Field src = deposit(mu.at_step(std::size_t(k) + 1), kernel, t1);
            rho = semigroup_step(rho, src, params.dt, params.D, params.r, params.alpha);
        }
        rho.time = t1;
        path.push(rho);
    }
    return path;
}

FieldPath free_evolution(const Field& rho0, double dt, int steps, double D, double r) {
    FieldPath path(rho0.grid, dt);
    path.reserve(std::size_t(steps) + 1);
    Field rho = rho0;
    rho.time = 0.0;
    path.push(rho);
    for (int k = 0; k < steps; ++k) {
        rho = free_step(rho, dt, D, r);
        rho.time = dt * (k + 1);
        path.push(rho);
    }
    return path;
}

namespace {

double path_gap(const FieldPath& a, const FieldPath& b) {
    double gap = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const auto d = field_difference(a.slice(k), b.slice(k));
        gap = std::max(gap, d.value_sup + d.grad_sup);
    }
    return gap;
}

} // namespace

SelfConsistentField solve_selfconsistent_field(const ModelParams& params, FieldMode mode,
                                               const NoiseUniverse& noise,
                                               const PicardOptions& picard) {
    params.validate();
    const Field rho0 = initial_field(params.rho0, params.grid);
    SelfConsistentField out;
    if (mode == FieldMode::Macroscopic) {
        const Field p0 = initial_density(params.mu0, params.grid);
        PksSolution sol = solve_pks(params, p0, rho0, params.T);
        out.rho = std::move(sol.rho);
        out.density = std::move(sol.density);
        return out;
    }
    // Picard on the field with common random numbers: every iterate sees the
    // same ensemble noise, so the map is deterministic.
    FieldPath current = free_evolution(rho0, params.dt, params.steps(), params.D, params.r);
    for (int it = 0; it < picard.max_iters; ++it) {
        const auto ens = simulate_mass_ensemble(params, current, noise, picard.replicas);
        const auto mu = estimate_mu(ens, params.grid.dim, params.dt);
        FieldPath next = field_from_measures(params, rho0, mu);
        const double gap = path_gap(next, current);
        out.picard_gaps.push_back(gap);
        current = std::move(next);
        if (gap < picard.tol) {
            out.rho = std::move(current);
            return out;
        }
        const std::size_t n = out.picard_gaps.size();
        if (n >= 3 && out.picard_gaps[n - 1] > out.picard_gaps[n - 2])
            throw PicardStalled("gap grew from " + std::to_string(out.picard_gaps[n - 2]) + " to " +
                                std::to_string(gap) + " at iteration " + std::to_string(n));
    }
    throw PicardStalled("no convergence after " + std::to_string(picard.max_iters) +
                        " iterations, last gap " + std::to_string(out.picard_gaps.back()));
}

} // namespace pksim
