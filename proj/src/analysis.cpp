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

#include "pksim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pksim/errors.hpp"
#include "pksim/parallel.hpp"

namespace pksim {

TestFunctionBank TestFunctionBank::standard(const GridSpec& grid) {
    std::vector<BumpFunction> b;
    const double L = grid.L;
    auto at = [&](double c) {
        Point p{};
        for (int a = 0; a < grid.dim; ++a) p[a] = c;
        return p;
    };
    for (int m = 0; m < 4; ++m) b.emplace_back(grid, at((2 * m + 1) * L / 8), L / 4);
    for (int m = 0; m < 4; ++m) b.emplace_back(grid, at((2 * m + 1) * L / 8 + L / 16), L / 8);
    return TestFunctionBank(std::move(b));
}

double TestFunctionBank::weight(std::size_t k) const { return std::ldexp(1.0, -int(k + 1)); }

double TestFunctionBank::weight_sum() const {
    double s = 0.0;
    for (std::size_t k = 0; k < size(); ++k) s += weight(k);
    return s;
}

std::vector<double> TestFunctionBank::pairings(const EmpiricalMeasure& m) const {
    std::vector<double> out(size());
    for (std::size_t k = 0; k < size(); ++k)
        out[k] = integrate(m, [&](const Point& x) { return bumps_[k].value(x); });
    return out;
}

std::vector<double> TestFunctionBank::pairings(const Field& density) const {
    std::vector<double> out(size());
    for (std::size_t k = 0; k < size(); ++k)
        out[k] = pair_density(density, [&](const Point& x) { return bumps_[k].value(x); });
    return out;
}

double vague_distance(const std::vector<double>& a, const std::vector<double>& b,
                      const TestFunctionBank& bank) {
    if (a.size() != bank.size() || b.size() != bank.size()) throw InvalidArgument("pairing count");
    double d = 0.0;
    for (std::size_t k = 0; k < bank.size(); ++k) d += bank.weight(k) * std::min(1.0, std::abs(a[k] - b[k]));
    return d;
}

double vague_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                      const TestFunctionBank& bank) {
    return vague_distance(bank.pairings(mu), bank.pairings(nu), bank);
}
double vague_distance(const EmpiricalMeasure& mu, const Field& nu, const TestFunctionBank& bank) {
    return vague_distance(bank.pairings(mu), bank.pairings(nu), bank);
}
double vague_distance(const Field& mu, const Field& nu, const TestFunctionBank& bank) {
    return vague_distance(bank.pairings(mu), bank.pairings(nu), bank);
}

const ReportRow* ConvergenceReport::find(const std::string& kind, std::uint64_t n0) const {
    for (const auto& r : rows)
        if (r.kind == kind && r.n0 == n0) return &r;
    return nullptr;
}

std::vector<double> ConvergenceReport::means(const std::string& kind) const {
    std::vector<double> m;
    for (const auto& r : rows)
        if (r.kind == kind) m.push_back(r.stats.mean);
    return m;
}

bool ConvergenceReport::all_checks_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& kv) { return kv.second; });
}

ReportRow make_row(std::string kind, std::uint64_t n0, std::vector<double> values) {
    ReportRow r;
    r.kind = std::move(kind);
    r.n0 = n0;
    r.stats = summarize(values);
    if (!values.empty()) {
        r.q10 = quantile(values, 0.1);
        r.q50 = quantile(values, 0.5);
        r.q90 = quantile(values, 0.9);
    }
    r.values = std::move(values);
    return r;
}

bool strictly_decreasing(const std::vector<double>& xs) {
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] < xs[i - 1])) return false;
    return true;
}

bool decreasing_allowing_one_inversion(const std::vector<SampleStats>& s) {
    int inversions = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i].mean <= s[i - 1].mean) continue;
        const double slack = std::sqrt(s[i].se * s[i].se + s[i - 1].se * s[i - 1].se);
        if (s[i].mean - s[i - 1].mean > slack) return false;
        ++inversions;
    }
    return inversions <= 1;
}

bool overlapping_monotone(const std::vector<ExceedanceRow>& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].p_hat <= rows[i - 1].p_hat) continue;
        if (rows[i].wilson.lo > rows[i - 1].wilson.hi) return false;
    }
    return true;
}

namespace {

std::string eps_label(double eps) {
    std::ostringstream os;
    os << eps;
    return os.str();
}

} // namespace

ConvergenceReport measure_convergence_experiment(const ModelParams& params,
                                                 const std::vector<std::uint64_t>& n0_list,
                                                 std::size_t replicas,
                                                 const NoiseUniverse& universe,
                                                 const SelfConsistentField& reference,
                                                 const TestFunctionBank& bank) {
    if (!reference.density) throw InvalidArgument("reference needs the mean-field density");
    const int steps = params.steps();
    std::vector<std::vector<double>> ref_pairings(std::size_t(steps) + 1);
    for (int k = 0; k <= steps; ++k) ref_pairings[std::size_t(k)] = bank.pairings(reference.density->slice(std::size_t(k)));

    ConvergenceReport rep;
    std::vector<double> dm_means, field_means;
    std::vector<SampleStats> dm_stats;
    std::vector<ReportRow> dm_rows, field_rows;
    for (std::uint64_t n0 : n0_list) {
        std::vector<double> dm(replicas), fe(replicas);
        parallel_for(replicas, [&](std::size_t r) {
            SimulationOptions opt;
            opt.record_field = true;
            const auto traj = simulate_microscopic(params, n0, universe.replica(r), opt);
            double sd = 0.0, sf = 0.0;
            for (int k = 0; k <= steps; ++k) {
                const auto mp = bank.pairings(traj.measure_at_step(k));
                sd = std::max(sd, vague_distance(mp, ref_pairings[std::size_t(k)], bank));
                const auto diff = field_difference(traj.field->slice(std::size_t(k)),
                                                   reference.rho.slice(std::size_t(k)));
                sf = std::max(sf, diff.value_sup + diff.grad_sup);
            }
            dm[r] = sd;
            fe[r] = sf;
        });
        dm_rows.push_back(make_row("dM", n0, std::move(dm)));
        field_rows.push_back(make_row("field", n0, std::move(fe)));
        dm_means.push_back(dm_rows.back().stats.mean);
        dm_stats.push_back(dm_rows.back().stats);
        field_means.push_back(field_rows.back().stats.mean);
    }
    rep.rows = std::move(dm_rows);
    rep.rows.insert(rep.rows.end(), field_rows.begin(), field_rows.end());

    if (n0_list.size() >= 2) {
        std::vector<double> lx, ly, fy;
        for (std::size_t i = 0; i < n0_list.size(); ++i) {
            lx.push_back(std::log(double(n0_list[i])));
            ly.push_back(std::log(dm_means[i]));
            fy.push_back(std::log(field_means[i]));
        }
        const auto fit = linear_fit(lx, ly);
        rep.summary["dM_slope"] = fit.slope;
        rep.summary["dM_slope_r2"] = fit.r2;
        rep.summary["field_slope"] = linear_fit(lx, fy).slope;
        rep.checks["dM_strictly_decreasing"] = strictly_decreasing(dm_means);
        rep.checks["dM_decreasing_one_inversion"] = decreasing_allowing_one_inversion(dm_stats);
        rep.checks["dM_slope_in_range"] = fit.slope >= -0.7 && fit.slope <= -0.3;
        rep.checks["field_decreasing"] = strictly_decreasing(field_means);
    }
    return rep;
}

ConvergenceReport measure_convergence_experiment(const ModelParams& params,
                                                 const std::vector<std::uint64_t>& n0_list,
                                                 std::size_t replicas,
                                                 const NoiseUniverse& universe) {
    const auto ref = solve_selfconsistent_field(params, FieldMode::Macroscopic, universe);
    return measure_convergence_experiment(params, n0_list, replicas, universe, ref,
                                          TestFunctionBank::standard(params.grid));
}

double coupling_distance(const BranchingTrajectory& a, const BranchingTrajectory& b) {
    const int steps = std::min(a.steps, b.steps);
    double d = 0.0;
    for (int k = 0; k <= steps; ++k) d = std::max(d, state_distance(a.state_at_step(k), b.state_at_step(k)));
    return d;
}

bool genealogies_differ(const BranchingTrajectory& a, const BranchingTrajectory& b) {
    if (a.cells.size() != b.cells.size()) return true;
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        const auto& x = a.cells[i];
        const auto& y = b.cells[i];
        if (!(x.id == y.id) || x.birth != y.birth || x.death != y.death) return true;
    }
    return false;
}

ConvergenceReport coupling_experiment(const ModelParams& params,
                                      const std::vector<std::uint64_t>& n0_list,
                                      std::size_t replicas, const std::vector<double>& epsilons,
                                      const NoiseUniverse& universe,
                                      const SelfConsistentField& reference) {
    const PathInterpolants interp(reference.rho, params.dt, params.steps());
    SimulationOptions opt;
    opt.record_field = false;
    std::vector<BranchingTrajectory> hybrid(replicas);
    parallel_for(replicas, [&](std::size_t r) {
        hybrid[r] = simulate_hybrid(params, interp, universe.replica(r), 1, opt);
    });

    ConvergenceReport rep;
    std::vector<ReportRow> s_rows, m_rows;
    std::map<double, std::vector<ExceedanceRow>> by_eps;
    for (std::uint64_t n0 : n0_list) {
        std::vector<double> S(replicas), mis(replicas);
        parallel_for(replicas, [&](std::size_t r) {
            const auto micro = simulate_microscopic(params, n0, universe.replica(r), opt);
            const auto line = lineage_restriction(micro, 1);
            S[r] = coupling_distance(line, hybrid[r]);
            mis[r] = genealogies_differ(line, hybrid[r]) ? 1.0 : 0.0;
        });
        for (double eps : epsilons) {
            ExceedanceRow e;
            e.kind = "dX>" + eps_label(eps);
            e.n0 = n0;
            e.epsilon = eps;
            e.replicas = replicas;
            e.exceed = std::size_t(std::count_if(S.begin(), S.end(), [&](double s) { return s > eps; }));
            e.p_hat = replicas ? double(e.exceed) / double(replicas) : 0.0;
            e.wilson = wilson_interval(e.exceed, replicas);
            by_eps[eps].push_back(e);
        }
        {
            ExceedanceRow e;
            e.kind = "mismatch";
            e.n0 = n0;
            e.replicas = replicas;
            e.exceed = std::size_t(std::count(mis.begin(), mis.end(), 1.0));
            e.p_hat = replicas ? double(e.exceed) / double(replicas) : 0.0;
            e.wilson = wilson_interval(e.exceed, replicas);
            by_eps[-1.0].push_back(e);
        }
        s_rows.push_back(make_row("dX", n0, std::move(S)));
        m_rows.push_back(make_row("mismatch", n0, std::move(mis)));
    }
    rep.rows = std::move(s_rows);
    rep.rows.insert(rep.rows.end(), m_rows.begin(), m_rows.end());
    for (double eps : epsilons) {
        const auto& rows = by_eps[eps];
        rep.exceedance.insert(rep.exceedance.end(), rows.begin(), rows.end());
        rep.checks["exceedance_monotone_eps=" + eps_label(eps)] = overlapping_monotone(rows);
    }
    const auto& mrows = by_eps[-1.0];
    rep.exceedance.insert(rep.exceedance.end(), mrows.begin(), mrows.end());
    double smax = 0.0;
    for (const auto& r : rep.rows)
        if (r.kind == "dX")
            for (double v : r.values) smax = std::max(smax, v);
    rep.summary["max_S"] = smax;
    return rep;
}

ConvergenceReport coupling_experiment(const ModelParams& params,
                                      const std::vector<std::uint64_t>& n0_list,
                                      std::size_t replicas, const std::vector<double>& epsilons,
                                      const NoiseUniverse& universe) {
    const auto ref = solve_selfconsistent_field(params, FieldMode::Macroscopic, universe);
    return coupling_experiment(params, n0_list, replicas, epsilons, universe, ref);
}

YuleReport yule_bound_check(const ModelParams& params, std::uint64_t n0, double T,
                            std::size_t replicas, const NoiseUniverse& universe) {
    ModelParams p = params;
    p.T = T;
    p.validate();
    YuleReport rep;
    rep.n0 = n0;
    rep.T = T;
    rep.replicas = replicas;
    rep.sup_ratio.resize(replicas);
    rep.final_ratio.resize(replicas);
    SimulationOptions opt;
    opt.record_field = false;
    opt.keep_dead = false;
    parallel_for(replicas, [&](std::size_t r) {
        const auto traj = simulate_microscopic(p, n0, universe.replica(r), opt);
        rep.sup_ratio[r] = double(traj.max_live) / double(n0);
        rep.final_ratio[r] = double(traj.live_counts.back()) / double(n0);
    });
    rep.sup_stats = summarize(rep.sup_ratio);
    rep.final_stats = summarize(rep.final_ratio);
    rep.bound = std::exp(p.lambda_bar * T);
    rep.pass = rep.sup_stats.mean - 3.0 * rep.sup_stats.se <= rep.bound;
    return rep;
}

namespace {

struct Generator {
    const ModelParams& params;
    const BumpFunction& phi;
    bool need_field;

    // (B phi + lambda phi)(x) with the field frozen at one step.
    double operator()(const Point& xin, const FieldInterpolant& rho) const {
        const int d = params.grid.dim;
        const Point x = params.grid.wrap(xin);
        double v = 0.0;
        Point g{};
        if (need_field) rho.eval_both(x, v, g);
        const double s = rate_argument(params.lambda_arg, v, g, d);
        const Point b = params.drift(x, g, d);
        const Point gphi = phi.grad(x);
        double out = 0.5 * params.sigma * params.sigma * phi.laplacian(x);
        for (int a = 0; a < d; ++a) out += b[a] * gphi[a];
        out += params.net_rate(x, s) * phi.value(x);
        return out;
    }
};

} // namespace

double weak_form_residual(const BranchingTrajectory& traj, const ModelParams& params,
                          const FieldPath& rho, const BumpFunction& phi) {
    const PathInterpolants interp(rho, params.dt, traj.steps);
    const Generator gen{params, phi, true};
    auto pair = [&](int k) {
        return integrate(traj.measure_at_step(k), [&](const Point& x) { return phi.value(x); });
    };
    double res = pair(traj.steps) - pair(0);
    for (int k = 0; k < traj.steps; ++k) {
        const auto& f = interp.at_step(k);
        res -= traj.dt * integrate(traj.measure_at_step(k), [&](const Point& x) { return gen(x, f); });
    }
    return res;
}

double weak_form_residual(const MassParticlePath& path, const ModelParams& params,
                          const FieldPath& rho, const BumpFunction& phi) {
    const int steps = int(path.X.size()) - 1;
    const PathInterpolants interp(rho, params.dt, steps);
    const Generator gen{params, phi, true};
    double res = path.M.back() * phi.value(path.X.back()) - path.M.front() * phi.value(path.X.front());
    for (int k = 0; k < steps; ++k)
        res -= params.dt * path.M[std::size_t(k)] * gen(path.X[std::size_t(k)], interp.at_step(k));
    return res;
}

ResponseReport event_mismatch_response(const ModelParams& params, const FieldPath& rho,
                                       const std::vector<double>& deltas, std::size_t replicas,
                                       const NoiseUniverse& universe) {
    SimulationOptions opt;
    opt.record_field = false;
    const int steps = params.steps();
    const PathInterpolants base_interp(rho, params.dt, steps);
    std::vector<BranchingTrajectory> base(replicas);
    parallel_for(replicas, [&](std::size_t r) {
        base[r] = simulate_hybrid(params, base_interp, universe.replica(r), 1, opt);
    });
    ResponseReport rep;
    std::vector<double> xs, ys;
    for (double delta : deltas) {
        FieldPath shifted(rho.grid(), rho.dt());
        for (const auto& s : rho.slices()) {
            Field f = s;
            for (double& v : f.values) v += delta;
            shifted.push(std::move(f));
        }
        const PathInterpolants interp(shifted, params.dt, steps);
        std::vector<char> mis(replicas, 0);
        parallel_for(replicas, [&](std::size_t r) {
            const auto pert = simulate_hybrid(params, interp, universe.replica(r), 1, opt);
            mis[r] = genealogies_differ(base[r], pert) ? 1 : 0;
        });
        ResponsePoint pt;
        pt.delta = delta;
        pt.replicas = replicas;
        pt.mismatches = std::size_t(std::count(mis.begin(), mis.end(), char(1)));
        pt.p_hat = replicas ? double(pt.mismatches) / double(replicas) : 0.0;
        rep.points.push_back(pt);
        xs.push_back(delta);
        ys.push_back(pt.p_hat);
    }
    if (xs.size() >= 2) rep.fit = linear_fit(xs, ys);
    return rep;
}

} // namespace pksim

namespace pksim {

std::vector<Observable> comparison_observables(const GridSpec& grid) {
    const auto bank = TestFunctionBank::standard(grid);
    std::vector<Observable> out;
    for (std::size_t k : {1u, 2u, 5u}) {
        const BumpFunction b = bank[k];
        out.push_back([b](const Point& x) { return b.value(x); });
    }
    return out;
}

bool EqualityReport::all_within() const {
    return std::all_of(rows.begin(), rows.end(), [](const EqualityRow& r) { return r.within; });
}

EqualityReport mean_field_equality(const ModelParams& params, const FieldPath& rho,
                                   std::size_t branching_replicas, std::size_t mass_replicas,
                                   const std::vector<Observable>& observables,
                                   const std::vector<int>& checkpoints,
                                   const NoiseUniverse& universe, double bands) {
    const PathInterpolants interp(rho, params.dt, params.steps());
    SimulationOptions opt;
    opt.record_field = false;
    // values[r][c * nobs + j] = <phi_j, xi-bar_{t_c}> of branching replica r
    const std::size_t nobs = observables.size();
    std::vector<std::vector<double>> values(branching_replicas);
    parallel_for(branching_replicas, [&](std::size_t r) {
        const auto traj = simulate_hybrid(params, interp, universe, std::uint32_t(r + 1), opt);
        auto& v = values[r];
        v.resize(checkpoints.size() * nobs);
        for (std::size_t c = 0; c < checkpoints.size(); ++c) {
            const auto m = traj.measure_at_step(checkpoints[c]);
            for (std::size_t j = 0; j < nobs; ++j) v[c * nobs + j] = integrate(m, observables[j]);
        }
    });
    const auto ens = simulate_mass_ensemble(params, rho, universe, mass_replicas);
    const auto mu = estimate_mu(ens, params.grid.dim, params.dt);

    EqualityReport rep;
    rep.bands = bands;
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        for (std::size_t j = 0; j < nobs; ++j) {
            EqualityRow row;
            row.step = checkpoints[c];
            row.time = params.dt * checkpoints[c];
            row.observable = j;
            const auto ms = mu.pairing(std::size_t(checkpoints[c]), observables[j]);
            std::vector<double> col(branching_replicas);
            for (std::size_t r = 0; r < branching_replicas; ++r) col[r] = values[r][c * nobs + j];
            const auto bs = summarize(col);
            row.mass_mean = ms.mean;
            row.mass_se = ms.se;
            row.branch_mean = bs.mean;
            row.branch_se = bs.se;
            row.diff = ms.mean - bs.mean;
            row.within = std::abs(row.diff) <= bands * std::hypot(ms.se, bs.se);
            rep.rows.push_back(row);
        }
    }
    return rep;
}

} // namespace pksim
