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
#include <map>
#include <string>
#include <vector>

#include "pksim/meanfield.hpp"
#include "pksim/microscopic.hpp"
#include "pksim/model.hpp"
#include "pksim/stats.hpp"
#include "pksim/testfn.hpp"

namespace pksim {

// Bumps phi_k with weights 2^-k, k = 1..size.
class TestFunctionBank {
public:
    TestFunctionBank() = default;
    explicit TestFunctionBank(std::vector<BumpFunction> bumps) : bumps_(std::move(bumps)) {}

    // Eight bumps: four of radius L/4 centred at (2m+1)L/8 and four of radius
    // L/8 centred at (2m+1)L/8 + L/16, m = 0..3 (both along the diagonal in 2D).
    static TestFunctionBank standard(const GridSpec& grid);

    std::size_t size() const { return bumps_.size(); }
    const BumpFunction& operator[](std::size_t k) const { return bumps_[k]; }
    double weight(std::size_t k) const;   // 2^-(k+1)
    double weight_sum() const;

    std::vector<double> pairings(const EmpiricalMeasure& m) const;
    std::vector<double> pairings(const Field& density) const;

private:
    std::vector<BumpFunction> bumps_;
};

// sum_k 2^-k min{1, |<phi_k, mu> - <phi_k, nu>|} from precomputed pairings.
double vague_distance(const std::vector<double>& mu_pairings,
                      const std::vector<double>& nu_pairings, const TestFunctionBank& bank);
double vague_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                      const TestFunctionBank& bank);
double vague_distance(const EmpiricalMeasure& mu, const Field& nu, const TestFunctionBank& bank);
double vague_distance(const Field& mu, const Field& nu, const TestFunctionBank& bank);

// One row of a report: a per-replica statistic for one n0 and its summary.
struct ReportRow {
    std::string kind;
    std::uint64_t n0 = 0;
    std::vector<double> values;   // per replica, replica order
    SampleStats stats;
    double q10 = 0.0, q50 = 0.0, q90 = 0.0;
};

// Estimated exceedance probability P(S > epsilon) with its Wilson interval.
struct ExceedanceRow {
    std::string kind;
    std::uint64_t n0 = 0;
    double epsilon = 0.0;
    std::size_t exceed = 0;
    std::size_t replicas = 0;
    double p_hat = 0.0;
    Interval wilson;
};

struct ConvergenceReport {
    std::vector<ReportRow> rows;           // sorted by kind then n0
    std::vector<ExceedanceRow> exceedance;
    std::map<std::string, double> summary;
    std::map<std::string, bool> checks;

    const ReportRow* find(const std::string& kind, std::uint64_t n0) const;
    std::vector<double> means(const std::string& kind) const;
    bool all_checks_pass() const;
};

ReportRow make_row(std::string kind, std::uint64_t n0, std::vector<double> values);

// Trend helpers used by the report checks.
bool strictly_decreasing(const std::vector<double>& xs);
// Decreasing except for at most one pair whose increase is within the
// combined standard errors.
bool decreasing_allowing_one_inversion(const std::vector<SampleStats>& s);
// Each consecutive pair is either non-increasing or has overlapping Wilson
// intervals.
bool overlapping_monotone(const std::vector<ExceedanceRow>& rows);

// Hydrodynamic-limit experiment: for each n0 and replica, the sup over step
// checkpoints of d_M(xi_t, mu_t) and of the field error
//   sup_x |rho^{n0} - rho| + sup_x |grad rho^{n0} - grad rho|.
// Replica r uses universe.replica(r) for every n0.
ConvergenceReport measure_convergence_experiment(const ModelParams& params,
                                                 const std::vector<std::uint64_t>& n0_list,
                                                 std::size_t replicas,
                                                 const NoiseUniverse& universe,
                                                 const SelfConsistentField& reference,
                                                 const TestFunctionBank& bank);
ConvergenceReport measure_convergence_experiment(const ModelParams& params,
                                                 const std::vector<std::uint64_t>& n0_list,
                                                 std::size_t replicas,
                                                 const NoiseUniverse& universe);

// Pathwise coupling experiment: S = sup over step checkpoints of the state
// distance between line 1 of the microscopic model and the hybrid model,
// both driven by universe.replica(r). Reports P(S > eps) and the probability
// that the two genealogies differ in any birth or death time.
ConvergenceReport coupling_experiment(const ModelParams& params,
                                      const std::vector<std::uint64_t>& n0_list,
                                      std::size_t replicas, const std::vector<double>& epsilons,
                                      const NoiseUniverse& universe,
                                      const SelfConsistentField& reference);
ConvergenceReport coupling_experiment(const ModelParams& params,
                                      const std::vector<std::uint64_t>& n0_list,
                                      std::size_t replicas, const std::vector<double>& epsilons,
                                      const NoiseUniverse& universe);

// sup over common step checkpoints of state_distance.
double coupling_distance(const BranchingTrajectory& a, const BranchingTrajectory& b);
// True when the sets of cells or any birth/death time differ.
bool genealogies_differ(const BranchingTrajectory& a, const BranchingTrajectory& b);

struct YuleReport {
    std::uint64_t n0 = 0;
    double T = 0.0;
    std::size_t replicas = 0;
    std::vector<double> sup_ratio;       // per replica sup_t live/n0
    std::vector<double> final_ratio;     // per replica live_T/n0
    SampleStats sup_stats;
    SampleStats final_stats;
    double bound = 0.0;                  // exp(lambda_bar T)
    bool pass = false;                   // mean - 3 se <= bound
};
YuleReport yule_bound_check(const ModelParams& params, std::uint64_t n0, double T,
                            std::size_t replicas, const NoiseUniverse& universe);

// <phi, xi_T> - <phi, xi_0> - sum_k dt <B_k phi + lambda phi, xi_{t_k}> for
// one branching trajectory, with B_k phi = (sigma^2/2) Lap phi + b.grad phi
// evaluated with the field at t_k.
double weak_form_residual(const BranchingTrajectory& traj, const ModelParams& params,
                          const FieldPath& rho, const BumpFunction& phi);
// Same identity for the (X, M) representation.
double weak_form_residual(const MassParticlePath& path, const ModelParams& params,
                          const FieldPath& rho, const BumpFunction& phi);

// Probability that the hybrid genealogy changes when a constant delta is
// added to the field path, per delta, with a linear fit through the origin
// region.
struct ResponsePoint {
    double delta = 0.0;
    std::size_t mismatches = 0;
    std::size_t replicas = 0;
    double p_hat = 0.0;
};
struct ResponseReport {
    std::vector<ResponsePoint> points;
    LinearFit fit;
};
ResponseReport event_mismatch_response(const ModelParams& params, const FieldPath& rho,
                                       const std::vector<double>& deltas, std::size_t replicas,
                                       const NoiseUniverse& universe);

// Three bank functions near the middle of the torus, used by the Monte-Carlo
// comparisons.
std::vector<Observable> comparison_observables(const GridSpec& grid);

// <phi, mu_t> from the (X, M) ensemble against <phi, mu-bar_t> from an
// ensemble of hybrid branching lines, both driven by the same field path but
// by independent streams. Branching replica r is line r+1.
struct EqualityRow {
    int step = 0;
    double time = 0.0;
    std::size_t observable = 0;
    double mass_mean = 0.0, mass_se = 0.0;
    double branch_mean = 0.0, branch_se = 0.0;
    double diff = 0.0;
    bool within = false;   // |diff| <= bands * sqrt(mass_se^2 + branch_se^2)
};
struct EqualityReport {
    double bands = 3.0;
    std::vector<EqualityRow> rows;
    bool all_within() const;
};
EqualityReport mean_field_equality(const ModelParams& params, const FieldPath& rho,
                                   std::size_t branching_replicas, std::size_t mass_replicas,
                                   const std::vector<Observable>& observables,
                                   const std::vector<int>& checkpoints,
                                   const NoiseUniverse& universe, double bands = 3.0);

} // namespace pksim
