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

#include "pksim/field_path.hpp"
#include "pksim/microscopic.hpp"
#include "pksim/model.hpp"
#include "pksim/noise.hpp"
#include "pksim/stats.hpp"
#include "pksim/testfn.hpp"

namespace pksim {

// Single particle carrying a mass, sampled at t_k = k dt.
struct MassParticlePath {
    std::vector<Point> X;
    std::vector<double> M;
};

// Monte-Carlo estimate of the mean measure: at each step, one atom per
// replica at X_k(t) with weight M_k(t)/K.
class MeanMeasurePath {
public:
    MeanMeasurePath(int dim, double dt, std::size_t replicas)
        : dim_(dim), dt_(dt), replicas_(replicas) {}

    void push(EmpiricalMeasure m) { measures_.push_back(std::move(m)); }

    int dim() const { return dim_; }
    double dt() const { return dt_; }
    std::size_t replicas() const { return replicas_; }
    std::size_t steps() const { return measures_.size(); }
    const EmpiricalMeasure& at_step(std::size_t k) const { return measures_.at(k); }

    // <phi, mu_t> and its standard error across replicas.
    SampleStats pairing(std::size_t k, const Observable& phi) const;

private:
    int dim_;
    double dt_;
    std::size_t replicas_;
    std::vector<EmpiricalMeasure> measures_;
};

// Branching diffusion of founder line `line` driven by a given field path,
// using the clocks and Wiener streams (line, word) of the universe. Same code
// path as the microscopic model; the empirical measure has unit atoms.
BranchingTrajectory simulate_hybrid(const ModelParams& params, const FieldPath& rho,
                                    const NoiseUniverse& noise, std::uint32_t line = 1,
                                    const SimulationOptions& options = {});
BranchingTrajectory simulate_hybrid(const ModelParams& params, const PathInterpolants& rho,
                                    const NoiseUniverse& noise, std::uint32_t line,
                                    const SimulationOptions& options = {});

// X by Euler-Maruyama, M by exponential Euler M <- M exp(lambda dt) with
// lambda taken at the end-of-step position and the field frozen at the start
// of the step, the convention of the branching engine, so that E[M delta_X]
// and the mean branching measure agree step by step. Replica k uses the
// stream (k+1, root) of the mass purposes.
MassParticlePath simulate_mass_particle(const ModelParams& params, const FieldPath& rho,
                                        const NoiseUniverse& noise, std::uint64_t replica);
MassParticlePath simulate_mass_particle(const ModelParams& params, const PathInterpolants& rho,
                                        const NoiseUniverse& noise, std::uint64_t replica);
std::vector<MassParticlePath> simulate_mass_ensemble(const ModelParams& params,
                                                     const FieldPath& rho,
                                                     const NoiseUniverse& noise,
                                                     std::size_t replicas, bool parallel = true);

// Throws EmptyEnsemble.
MeanMeasurePath estimate_mu(const std::vector<MassParticlePath>& ensemble, int dim, double dt);

// Kernel smoothing of a mean-measure path onto the grid at each step.
FieldPath smooth_mu(const MeanMeasurePath& mu, const Kernel& kernel);

enum class FieldMode { Macroscopic, Picard };

struct PicardOptions {
    std::size_t replicas = 2000;
    int max_iters = 30;
    double tol = 1e-10;
};

struct SelfConsistentField {
    FieldPath rho;
    std::optional<FieldPath> density;   // macroscopic mode: density of mu_t
    std::vector<double> picard_gaps;    // picard mode: sup_t gap per iteration
};

// Field of the mean-field models. Macroscopic mode solves the PKS system;
// picard mode iterates rho -> (X, M) ensemble -> rho until the sup-in-time
// gap in value plus gradient drops below tol. Throws PicardStalled when the
// gap grows after the first iteration or max_iters is reached.
SelfConsistentField solve_selfconsistent_field(const ModelParams& params, FieldMode mode,
                                               const NoiseUniverse& noise,
                                               const PicardOptions& picard = {});

// rho solved with a prescribed measure path as source (one semigroup step per
// dt, source taken at the end of each step as in the microscopic model).
FieldPath field_from_measures(const ModelParams& params, const Field& rho0,
                              const MeanMeasurePath& mu);

FieldPath free_evolution(const Field& rho0, double dt, int steps, double D, double r);

} // namespace pksim
