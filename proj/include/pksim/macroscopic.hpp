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

#include <string>
#include <vector>

#include "pksim/field_path.hpp"
#include "pksim/meanfield.hpp"
#include "pksim/model.hpp"
#include "pksim/testfn.hpp"

namespace pksim {

// Cell density p has the same layout as the chemoattractant field.
using DensityField = Field;

enum class AdvectionScheme { Auto, Upwind, SemiLagrangian };

struct PksOptions {
    AdvectionScheme advection = AdvectionScheme::Auto;
    // Auto switches to the semi-Lagrangian remap above this Courant number.
    double auto_threshold = 0.8;
};

struct PksSolution {
    FieldPath density;
    FieldPath rho;
    std::vector<double> mass;       // integral of p at each step
    double max_cfl = 0.0;
    int semi_lagrangian_substeps = 0;
    double min_density = 0.0;
};

// Strang splitting per step of length dt:
//   P(dt/2) . R(dt) . P(dt/2)^*
// where P = diffusion(dt/2) then advection(dt/2) then reaction(dt/2) for p
// with rho frozen, P^* the same substeps in reverse order, and R the exact
// semigroup step for rho with source kappa*p frozen. The p equation is
//   dp/dt = (sigma^2/2) Lap p - div(p b(x, grad rho)) + lambda(x, s) p.
// Throws CFLViolation (upwind only) and GridMismatch.
PksSolution solve_pks(const ModelParams& params, const DensityField& p0, const Field& rho0,
                      double T, const PksOptions& options = {});

// Individual substeps, exposed for testing.
void pks_diffuse(DensityField& p, double sigma, double dt);
void pks_react(DensityField& p, const Field& rho, const ModelParams& params, double dt);
// Returns the Courant number used.
double pks_advect(DensityField& p, const Field& rho, const ModelParams& params, double dt,
                  AdvectionScheme scheme, double auto_threshold = 0.8,
                  bool* used_semi_lagrangian = nullptr);

struct ComparisonRow {
    int step = 0;
    double time = 0.0;
    std::size_t observable = 0;
    double pde = 0.0;
    double mc = 0.0;
    double se = 0.0;
    double diff = 0.0;
    bool within = false;    // |diff| <= bands * se
};

struct ComparisonReport {
    double bands = 3.0;
    std::vector<ComparisonRow> rows;
    bool all_within() const;
};

// |<phi, p_t> - <phi, mu_t>| against the Monte-Carlo standard error, per
// observable and checkpoint step.
ComparisonReport compare_with_monte_carlo(const PksSolution& pks, const MeanMeasurePath& mc,
                                          const std::vector<Observable>& observables,
                                          const std::vector<int>& checkpoints,
                                          double bands = 3.0);

// Richardson estimate of the temporal order from runs with dt, dt/2, dt/4.
struct OrderReport {
    double dt = 0.0;
    double err_coarse = 0.0;   // |u_dt - u_dt/2|
    double err_fine = 0.0;     // |u_dt/2 - u_dt/4|
    double order = 0.0;
};
OrderReport strang_order(const ModelParams& params, double T, const PksOptions& options = {});

} // namespace pksim
