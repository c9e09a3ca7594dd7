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

#include "pksim/macroscopic.hpp"

#include <algorithm>
#include <cmath>

#include "pksim/errors.hpp"

namespace pksim {

void pks_diffuse(DensityField& p, double sigma, double dt) {
    SpectralGrid sg(p.grid);
    Spectrum s = sg.forward(p.values);
    const double c = 0.5 * sigma * sigma * dt;
    for (std::size_t m = 0; m < s.size(); ++m) s[m] *= std::exp(-c * sg.wavenumber_sq(m));
    p.values = sg.inverse(s);
}

namespace {

bool needs_gradient_argument(const ModelParams& params) {
    return params.lambda_arg == LambdaArg::GradRhoNorm;
}

// Velocity component `axis` on the faces x_i + h/2 e_axis.
std::vector<double> face_velocity(const Field& rho, const Spectrum& spec, const SpectralGrid& sg,
                                  const ModelParams& params, int axis) {
    const GridSpec& g = rho.grid;
    const int d = g.dim;
    std::array<std::vector<double>, kMaxDim> grad;
    for (int c = 0; c < d; ++c) grad[c] = sg.derivative_shifted(spec, c, axis);
    std::vector<double> v(g.size());
    const double hh = 0.5 * g.h();
    for (std::size_t m = 0; m < v.size(); ++m) {
        Point x = g.node(m);
        x[axis] += hh;
        Point gr{};
        for (int c = 0; c < d; ++c) gr[c] = grad[c][m];
        v[m] = params.drift(g.wrap(x), gr, d)[axis];
    }
    return v;
}

// Neighbour of flat index m along axis with offset +-1.
std::size_t neighbour(const GridSpec& g, std::size_t m, int axis, int off) {
    const std::size_t n = std::size_t(g.n);
    if (g.dim == 1) return (m + n + std::size_t(off + 1) - 1) % n;
    std::size_t i = m / n, j = m % n;
    if (axis == 0)
        i = (i + n + std::size_t(off + 1) - 1) % n;
    else
        j = (j + n + std::size_t(off + 1) - 1) % n;
    return i * n + j;
}

void upwind_rhs(const GridSpec& g, const std::vector<double>& p,
                const std::array<std::vector<double>, kMaxDim>& vf, std::vector<double>& out) {
    const double inv_h = 1.0 / g.h();
    std::fill(out.begin(), out.end(), 0.0);
    for (int a = 0; a < g.dim; ++a) {
        for (std::size_t m = 0; m < p.size(); ++m) {
            const std::size_t right = neighbour(g, m, a, +1);
            const double v = vf[a][m];
            const double flux = v >= 0.0 ? v * p[m] : v * p[right];
            out[m] -= flux * inv_h;
            out[right] += flux * inv_h;
        }
    }
}

} // namespace

double pks_advect(DensityField& p, const Field& rho, const ModelParams& params, double dt,
                  AdvectionScheme scheme, double auto_threshold, bool* used_semi_lagrangian) {
    require_same_grid(p.grid, rho.grid, "pks_advect");
    if (used_semi_lagrangian) *used_semi_lagrangian = false;
    if (params.drift.is_zero()) return 0.0;
    const GridSpec& g = p.grid;
    const int d = g.dim;
    const SpectralGrid sg(g);
    const Spectrum spec = sg.forward(rho.values);

    std::array<std::vector<double>, kMaxDim> vf;
    for (int a = 0; a < d; ++a) vf[a] = face_velocity(rho, spec, sg, params, a);

    // Outflow Courant number per cell.
    double cfl = 0.0;
    for (std::size_t m = 0; m < g.size(); ++m) {
        double out = 0.0;
        for (int a = 0; a < d; ++a) {
            out += std::max(vf[a][m], 0.0);
            out += std::max(-vf[a][neighbour(g, m, a, -1)], 0.0);
        }
        cfl = std::max(cfl, out * dt / g.h());
    }

    bool semi = scheme == AdvectionScheme::SemiLagrangian ||
                (scheme == AdvectionScheme::Auto && cfl > auto_threshold);
    if (scheme == AdvectionScheme::Upwind && cfl > 1.0)
        throw CFLViolation("Courant number " + std::to_string(cfl) + " > 1; need dt <= " +
                           std::to_string(dt / cfl));

    if (!semi) {
        // SSP-RK2 on the upwind fluxes.
        std::vector<double> k1(g.size()), k2(g.size()), stage(g.size());
        upwind_rhs(g, p.values, vf, k1);
        for (std::size_t m = 0; m < stage.size(); ++m) stage[m] = p.values[m] + dt * k1[m];
        upwind_rhs(g, stage, vf, k2);
        for (std::size_t m = 0; m < stage.size(); ++m)
            p.values[m] = 0.5 * p.values[m] + 0.5 * (stage[m] + dt * k2[m]);
        return cfl;
    }

    // Forward remap: the mass of each cell travels with the node velocity
    // and is shared linearly between the cells around its landing point.
    if (used_semi_lagrangian) *used_semi_lagrangian = true;
    std::array<std::vector<double>, kMaxDim> grad;
    for (int a = 0; a < d; ++a) grad[a] = sg.derivative(rho.values, a);
    std::vector<double> out(g.size(), 0.0);
    const double h = g.h();
    const int n = g.n;
    for (std::size_t m = 0; m < g.size(); ++m) {
        if (p.values[m] == 0.0) continue;
        const Point x = g.node(m);
        Point gr{};
        for (int a = 0; a < d; ++a) gr[a] = grad[a][m];
        const Point v = params.drift(x, gr, d);
        int base[kMaxDim] = {0, 0};
        double frac[kMaxDim] = {0.0, 0.0};
        for (int a = 0; a < d; ++a) {
            const double u = (x[a] + v[a] * dt) / h;
            const double f = std::floor(u);
            base[a] = int(((long(f) % n) + n) % n);
            frac[a] = u - f;
        }
        if (d == 1) {
            out[std::size_t(base[0])] += (1.0 - frac[0]) * p.values[m];
            out[std::size_t((base[0] + 1) % n)] += frac[0] * p.values[m];
        } else {
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    const double w = (i ? frac[0] : 1.0 - frac[0]) * (j ? frac[1] : 1.0 - frac[1]);
                    const std::size_t idx = std::size_t((base[0] + i) % n) * std::size_t(n) +
                                            std::size_t((base[1] + j) % n);
                    out[idx] += w * p.values[m];
                }
        }
    }
    p.values = std::move(out);
    return cfl;
}

void pks_react(DensityField& p, const Field& rho, const ModelParams& params, double dt) {
    require_same_grid(p.grid, rho.grid, "pks_react");
    const GridSpec& g = p.grid;
    std::array<std::vector<double>, kMaxDim> grad;
    if (needs_gradient_argument(params)) grad = grid_gradient(rho);
    for (std::size_t m = 0; m < g.size(); ++m) {
        Point gr{};
        if (needs_gradient_argument(params))
            for (int a = 0; a < g.dim; ++a) gr[a] = grad[a][m];
        const double s = rate_argument(params.lambda_arg, rho.values[m], gr, g.dim);
        const Point x = g.node(m);
        p.values[m] *= std::exp(params.net_rate(x, s) * dt);
    }
}

PksSolution solve_pks(const ModelParams& params, const DensityField& p0, const Field& rho0,
                      double T, const PksOptions& options) {
    params.validate();
    require_same_grid(p0.grid, params.grid, "solve_pks density");
    require_same_grid(rho0.grid, params.grid, "solve_pks field");
    const double dt = params.dt;
    const int steps = int(std::llround(T / dt));
    const Kernel kernel = params.kernel();

    PksSolution sol;
    sol.density = FieldPath(params.grid, dt);
    sol.rho = FieldPath(params.grid, dt);
    sol.density.reserve(std::size_t(steps) + 1);
    sol.rho.reserve(std::size_t(steps) + 1);
    DensityField p = p0;
    Field rho = rho0;
    p.time = rho.time = 0.0;
    sol.density.push(p);
    sol.rho.push(rho);
    sol.mass.push_back(p.integral());
    sol.min_density = *std::min_element(p.values.begin(), p.values.end());

    const double half = 0.5 * dt;
    auto advect = [&](const Field& f) {
        bool sl = false;
        const double c = pks_advect(p, f, params, half, options.advection, options.auto_threshold, &sl);
        sol.max_cfl = std::max(sol.max_cfl, c);
        if (sl) ++sol.semi_lagrangian_substeps;
    };
    for (int k = 0; k < steps; ++k) {
        pks_diffuse(p, params.sigma, half);
        advect(rho);
        pks_react(p, rho, params, half);

        Field next;
        if (params.alpha == 0.0) {
            next = free_step(rho, dt, params.D, params.r);
        } else {
            next = semigroup_step(rho, convolve(p, kernel), dt, params.D, params.r, params.alpha);
        }
        rho = std::move(next);
        rho.time = dt * (k + 1);

        pks_react(p, rho, params, half);
        advect(rho);
        pks_diffuse(p, params.sigma, half);
        p.time = rho.time;

        for (double v : p.values)
            if (!std::isfinite(v)) throw NonFiniteState("density became non-finite");
        sol.min_density = std::min(sol.min_density, *std::min_element(p.values.begin(), p.values.end()));
        sol.density.push(p);
        sol.rho.push(rho);
        sol.mass.push_back(p.integral());
    }
    return sol;
}

bool ComparisonReport::all_within() const {
    return std::all_of(rows.begin(), rows.end(), [](const ComparisonRow& r) { return r.within; });
}

ComparisonReport compare_with_monte_carlo(const PksSolution& pks, const MeanMeasurePath& mc,
                                          const std::vector<Observable>& observables,
                                          const std::vector<int>& checkpoints, double bands) {
    ComparisonReport rep;
    rep.bands = bands;
    for (int k : checkpoints) {
        for (std::size_t j = 0; j < observables.size(); ++j) {
            ComparisonRow row;
            row.step = k;
            row.time = pks.density.dt() * k;
            row.observable = j;
            row.pde = pair_density(pks.density.slice(std::size_t(k)), observables[j]);
            const SampleStats s = mc.pairing(std::size_t(k), observables[j]);
            row.mc = s.mean;
            row.se = s.se;
            row.diff = row.pde - row.mc;
            // The absolute floor only absorbs round-off when both sides are exact.
            row.within = std::abs(row.diff) <= bands * row.se + 1e-12 * (1.0 + std::abs(row.pde));
            rep.rows.push_back(row);
        }
    }
    return rep;
}

OrderReport strang_order(const ModelParams& params, double T, const PksOptions& options) {
    const Field p0 = initial_density(params.mu0, params.grid);
    const Field rho0 = initial_field(params.rho0, params.grid);
    auto run = [&](double dt) {
        ModelParams q = params;
        q.dt = dt;
        q.T = T;
        PksSolution s = solve_pks(q, p0, rho0, T, options);
        return std::pair<Field, Field>{s.density.back(), s.rho.back()};
    };
    const auto a = run(params.dt);
    const auto b = run(params.dt / 2);
    const auto c = run(params.dt / 4);
    auto err = [](const std::pair<Field, Field>& x, const std::pair<Field, Field>& y) {
        double e = 0.0;
        for (std::size_t m = 0; m < x.first.values.size(); ++m) {
            e = std::max(e, std::abs(x.first.values[m] - y.first.values[m]));
            e = std::max(e, std::abs(x.second.values[m] - y.second.values[m]));
        }
        return e;
    };
    OrderReport r;
    r.dt = params.dt;
    r.err_coarse = err(a, b);
    r.err_fine = err(b, c);
    r.order = std::log2(r.err_coarse / r.err_fine);
    return r;
}

} // namespace pksim
