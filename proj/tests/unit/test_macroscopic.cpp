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


#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "pksim/errors.hpp"
#include "pksim/macroscopic.hpp"
#include "pksim/meanfield.hpp"

using namespace pksim;

namespace {

constexpr double kPi = std::numbers::pi;

Field cosine_density(const GridSpec& g, int mode, double amp) {
    Field f(g);
    for (std::size_t i = 0; i < g.size(); ++i)
        f.values[i] = 1.0 + amp * std::cos(2 * kPi * mode * g.node(i)[0] / g.L);
    return f;
}

} // namespace

TEST_CASE("pure heat flow decays Fourier modes at the analytic rate") {
    auto p = free_params(64);
    p.sigma = 0.8;
    const auto p0 = cosine_density(p.grid, 2, 0.5);
    const auto sol = solve_pks(p, p0, initial_field(p.rho0, p.grid), p.T);
    const double k = 2 * kPi * 2 / p.grid.L;
    const double amp = 0.5 * std::exp(-0.5 * p.sigma * p.sigma * k * k * p.T);
    const auto& pT = sol.density.back();
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
        const double expect = 1.0 + amp * std::cos(k * p.grid.node(i)[0]);
        CHECK(std::abs(pT.values[i] - expect) < 1e-6 * amp);
    }
}

TEST_CASE("constant net rate grows the mass exponentially") {
    auto p = free_params(64);
    p.lambda_bar = 2.0;
    p.birth = ConstantRate{1.1};
    p.death = ConstantRate{0.3};
    p.drift = ChemotaxisDrift{1.0, 0.5};
    p.alpha = 1.0;
    p.mu0 = GaussianLaw{{5.0, 0.0}, 1.0};
    const auto p0 = initial_density(p.mu0, p.grid);
    const auto sol = solve_pks(p, p0, initial_field(p.rho0, p.grid), p.T);
    for (std::size_t k = 0; k < sol.mass.size(); ++k)
        CHECK(sol.mass[k] == doctest::Approx(sol.mass[0] * std::exp(0.8 * p.dt * double(k))).epsilon(1e-8));
}

TEST_CASE("discrete mass law residual shrinks at least like dt^2 per step") {
    auto p = base_params(128);
    p.alpha = 2.0;
    auto residual = [&](double dt) {
        auto q = p;
        q.dt = dt;
        const auto sol = solve_pks(q, initial_density(q.mu0, q.grid), initial_field(q.rho0, q.grid), 0.5);
        auto growth = [&](std::size_t k) {
            const auto& dens = sol.density.slice(k);
            const auto& rho = sol.rho.slice(k);
            double s = 0.0;
            for (std::size_t i = 0; i < q.grid.size(); ++i)
                s += q.net_rate(q.grid.node(i), rho.values[i]) * dens.values[i];
            return s * q.grid.h();
        };
        double worst = 0.0;
        for (std::size_t k = 0; k + 1 < sol.mass.size(); ++k) {
            const double r = sol.mass[k + 1] - sol.mass[k] - 0.5 * dt * (growth(k) + growth(k + 1));
            worst = std::max(worst, std::abs(r));
        }
        return worst;
    };
    const double coarse = residual(0.02), fine = residual(0.01);
    CHECK(coarse > 0.0);
    CHECK(coarse / fine > 3.2);
}

TEST_CASE("upwind advection keeps densities nonnegative and conserves mass") {
    std::mt19937_64 gen(61);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int dim : {1, 2}) {
        auto p = base_params(dim == 1 ? 128 : 32);
        p.grid.dim = dim;
        p.drift = ChemotaxisDrift{5.0, 2.0};
        Field rho(p.grid), dens(p.grid);
        for (auto& v : rho.values) v = u(gen);
        for (auto& v : dens.values) v = u(gen) < 0.3 ? 0.0 : u(gen);
        const double m0 = dens.integral();
        for (int step = 0; step < 50; ++step) {
            const double cfl = pks_advect(dens, rho, p, 0.005, AdvectionScheme::Upwind);
            REQUIRE(cfl <= 1.0);
            for (double v : dens.values) CHECK(v >= 0.0);
        }
        CHECK(dens.integral() == doctest::Approx(m0).epsilon(1e-12));

        bool sl = false;
        pks_advect(dens, rho, p, 0.005, AdvectionScheme::SemiLagrangian, 0.8, &sl);
        CHECK(sl);
        for (double v : dens.values) CHECK(v >= 0.0);
        CHECK(dens.integral() == doctest::Approx(m0).epsilon(1e-12));
    }
}

TEST_CASE("Courant limit") {
    auto p = base_params(128);
    p.drift = ConstantDrift{{4.0, 0.0}};
    Field rho(p.grid);
    auto dens = cosine_density(p.grid, 1, 0.5);
    // h = 0.078, |b| dt / h = 4 * 0.05 / 0.078 > 1
    CHECK_THROWS_AS(pks_advect(dens, rho, p, 0.05, AdvectionScheme::Upwind), CFLViolation);
    bool sl = false;
    const double cfl = pks_advect(dens, rho, p, 0.05, AdvectionScheme::Auto, 0.8, &sl);
    CHECK(cfl > 0.8);
    CHECK(sl);
    sl = false;
    pks_advect(dens, rho, p, 0.005, AdvectionScheme::Auto, 0.8, &sl);
    CHECK_FALSE(sl);
}

TEST_CASE("constant drift transports the density") {
    auto p = free_params(128);
    p.drift = ConstantDrift{{0.5, 0.0}};
    p.mu0 = GaussianLaw{{4.0, 0.0}, 0.7};
    const auto sol = solve_pks(p, initial_density(p.mu0, p.grid), initial_field(p.rho0, p.grid), p.T);
    // first Fourier coefficient phase gives the centre on the torus
    auto centre = [&](const Field& f) {
        double c = 0.0, s = 0.0;
        for (std::size_t i = 0; i < f.grid.size(); ++i) {
            const double th = 2 * kPi * f.grid.node(i)[0] / f.grid.L;
            c += f.values[i] * std::cos(th);
            s += f.values[i] * std::sin(th);
        }
        return std::atan2(s, c) * f.grid.L / (2 * kPi);
    };
    CHECK(centre(sol.density.back()) - centre(sol.density.slice(0)) ==
          doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("decoupled field is free evolution") {
    auto p = base_params(64);
    p.alpha = 0.0;
    const auto rho0 = initial_field(p.rho0, p.grid);
    const auto sol = solve_pks(p, initial_density(p.mu0, p.grid), rho0, p.T);
    const auto free = free_evolution(rho0, p.dt, p.steps(), p.D, p.r);
    for (std::size_t k = 0; k < free.size(); ++k) CHECK(sol.rho.slice(k).values == free.slice(k).values);
}

TEST_CASE("Strang splitting is second order") {
    auto p = base_params(128);
    p.dt = 0.02;
    const auto rep = strang_order(p, 0.5);
    CHECK(rep.err_fine < rep.err_coarse);
    CHECK(rep.order >= 1.8);
    CHECK(rep.order <= 2.2);
}

TEST_CASE("Monte-Carlo comparison: point mass keeps its mean") {
    auto p = free_params(128);
    p.mu0 = PointLaw{{5.0, 0.0}};
    const auto sol = solve_pks(p, initial_density(p.mu0, p.grid), initial_field(p.rho0, p.grid), p.T);
    const auto ens = simulate_mass_ensemble(p, sol.rho, NoiseUniverse(62, 1), 4000);
    const auto mu = estimate_mu(ens, 1, p.dt);
    // the observable uses unwrapped atoms; on the grid the node at the seam
    // (distance L/2, density ~ e^{-12.5}) has no mirror partner
    const Observable x = [](const Point& y) { return y[0] - 5.0; };
    const int K = p.steps();
    const auto rep = compare_with_monte_carlo(sol, mu, {x}, {K / 2, K});
    for (const auto& row : rep.rows) CHECK(std::abs(row.pde) < 1e-5);
    CHECK(rep.all_within());
}

TEST_CASE("Monte-Carlo comparison: constant rate mass") {
    auto p = free_params(128);
    p.birth = ConstantRate{0.7};
    const auto sol = solve_pks(p, initial_density(p.mu0, p.grid), initial_field(p.rho0, p.grid), p.T);
    CHECK(sol.mass.back() == doctest::Approx(std::exp(0.7)).epsilon(1e-8));
    const auto ens = simulate_mass_ensemble(p, sol.rho, NoiseUniverse(63, 1), 500);
    const auto mu = estimate_mu(ens, 1, p.dt);
    const Observable one = [](const Point&) { return 1.0; };
    const auto rep = compare_with_monte_carlo(sol, mu, {one}, {p.steps()});
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].pde == doctest::Approx(std::exp(0.7)).epsilon(1e-8));
    CHECK(rep.all_within());
}

TEST_CASE("solver rejects mismatched grids") {
    auto p = base_params(64);
    CHECK_THROWS_AS(solve_pks(p, Field(GridSpec{1, 32, 10.0}), initial_field(p.rho0, p.grid), p.T),
                    GridMismatch);
}
