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


// Acceptance run: one PASS/FAIL line per criterion. Criteria 1-8 run in
// process from the shipped configs; 9 reruns every CLI experiment with one
// and eight threads and compares the output directories byte for byte.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>
#include <unistd.h>

#include "pksim/analysis.hpp"
#include "pksim/config.hpp"
#include "pksim/field.hpp"
#include "pksim/macroscopic.hpp"
#include "pksim/meanfield.hpp"
#include "pksim/microscopic.hpp"
#include "pksim/report.hpp"
#include "pksim/textio.hpp"

namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;
using namespace pksim;

namespace {

ExperimentConfig config(const std::string& name) {
    return load_config(std::string(PKSIM_CONFIG_DIR) + "/" + name + ".cfg");
}

NoiseUniverse universe(const ExperimentConfig& c) { return NoiseUniverse(c.seed, c.model.grid.dim); }

std::vector<int> checkpoints(int steps) { return {steps / 3, 2 * steps / 3, steps}; }

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

Outcome conservation() {
    const auto c = config("conservation");
    const auto traj = simulate_microscopic(c.model, c.n0, universe(c));
    bool ok = c.n0 == 1000 && traj.events.empty() && traj.max_live == c.n0;
    for (auto n : traj.live_counts) ok = ok && n == c.n0;
    return {ok, "snapshots=" + std::to_string(traj.live_counts.size()) +
                    " events=" + std::to_string(traj.events.size()) +
                    " max_live=" + std::to_string(traj.max_live)};
}

Outcome yule() {
    const auto c = config("yule");
    const auto rep = yule_bound_check(c.model, c.n0, c.model.T, c.replicas, universe(c));
    const double e = std::exp(1.0);
    const bool near = std::abs(rep.sup_stats.mean - e) <= 3 * rep.sup_stats.se;
    return {near && rep.pass, "mean sup live/n0=" + fmt("%.5f", rep.sup_stats.mean) +
                                  " se=" + fmt("%.5f", rep.sup_stats.se) + " e=" + fmt("%.5f", e) +
                                  " bound_check=" + (rep.pass ? "PASS" : "FAIL")};
}

// Amplitude of cos(2 pi (m0 x + m1 y) / L) in f by discrete projection.
double amplitude(const Field& f, int m0, int m1) {
    const auto& g = f.grid;
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Point x = g.node(i);
        s += f.values[i] * std::cos(2 * kPi * (m0 * x[0] + (g.dim == 2 ? m1 * x[1] : 0.0)) / g.L);
    }
    return 2.0 * s / double(g.size());
}

Outcome fourier_decay() {
    const double D = 1.0, r = 1.0, alpha = 1.0, dt = 0.01;
    double worst = 0.0;
    for (int dim : {1, 2}) {
        const GridSpec g{dim, 64, 10.0};
        const int m0 = 3, m1 = dim == 2 ? 2 : 0;
        Field rho(g), zero(g);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const Point x = g.node(i);
            rho.values[i] = 0.7 * std::cos(2 * kPi * (m0 * x[0] + m1 * x[1]) / g.L);
        }
        const double k2 = std::pow(2 * kPi / g.L, 2) * (m0 * m0 + m1 * m1);
        const double a0 = amplitude(rho, m0, m1);
        double prev = a0;
        for (int k = 1; k <= 100; ++k) {
            rho = semigroup_step(rho, zero, dt, D, r, alpha);
            const double a = amplitude(rho, m0, m1);
            const double step = std::abs(a / prev - std::exp(-(D * k2 + r) * dt)) / std::exp(-(D * k2 + r) * dt);
            const double exact = a0 * std::exp(-(D * k2 + r) * dt * k);
            worst = std::max({worst, step, std::abs(a - exact) / std::abs(exact)});
            prev = a;
        }
    }
    return {worst < 1e-8, "max relative error=" + fmt("%.3e", worst) + " (d=1,2; 100 steps)"};
}

Outcome strang() {
    const auto c = config("order");
    PksOptions opt;
    opt.advection = c.advection;
    const auto o = strang_order(c.model, c.model.T, opt);
    return {o.order >= 1.8 && o.order <= 2.2,
            "order=" + fmt("%.4f", o.order) + " err(dt)=" + fmt("%.3e", o.err_coarse) +
                " err(dt/2)=" + fmt("%.3e", o.err_fine)};
}

Outcome mean_field() {
    const auto c = config("meanfield");
    const auto u = universe(c);
    const auto sc = solve_selfconsistent_field(c.model, c.field_mode, u, c.picard);
    const auto obs = comparison_observables(c.model.grid);
    const auto eq = mean_field_equality(c.model, sc.rho, c.replicas, c.ensemble, obs,
                                        checkpoints(c.model.steps()), u);
    double worst = 0.0;
    for (const auto& r : eq.rows)
        worst = std::max(worst, std::abs(r.diff) / std::hypot(r.mass_se, r.branch_se));
    return {c.ensemble == 10000 && c.replicas == 1000 && eq.rows.size() == 9 && eq.all_within(),
            "(X,M)=" + std::to_string(c.ensemble) + " branching=" + std::to_string(c.replicas) +
                " rows=" + std::to_string(eq.rows.size()) + " max |diff|/se=" + fmt("%.2f", worst)};
}

Outcome pde_vs_mc() {
    const auto c = config("meanfield");
    const auto u = universe(c);
    const auto sc = solve_selfconsistent_field(c.model, FieldMode::Macroscopic, u);
    PksSolution pks;
    pks.density = *sc.density;
    const auto ens = simulate_mass_ensemble(c.model, sc.rho, u, c.ensemble);
    const auto mu = estimate_mu(ens, c.model.grid.dim, c.model.dt);
    const auto rep = compare_with_monte_carlo(pks, mu, comparison_observables(c.model.grid),
                                              checkpoints(c.model.steps()));
    double worst = 0.0;
    for (const auto& r : rep.rows) worst = std::max(worst, std::abs(r.diff) / r.se);
    return {c.model.alpha > 0 && rep.rows.size() == 9 && rep.all_within(),
            "rows=" + std::to_string(rep.rows.size()) + " max |pde-mc|/se=" + fmt("%.2f", worst)};
}

std::string join(const std::vector<double>& xs, const char* f) {
    std::string s;
    for (double x : xs) s += (s.empty() ? "" : ",") + fmt(f, x);
    return s;
}

Outcome convergence() {
    const auto c = config("converge");
    const auto rep = measure_convergence_experiment(c.model, c.n0_list, c.replicas, universe(c));
    const bool ok = c.n0_list == std::vector<std::uint64_t>{16, 64, 256, 1024} && c.replicas == 20 &&
                    rep.checks.at("dM_strictly_decreasing") && rep.checks.at("dM_slope_in_range") &&
                    rep.checks.at("field_decreasing");
    return {ok, "dM=" + join(rep.means("dM"), "%.4f") + " slope=" + fmt("%.3f", rep.summary.at("dM_slope")) +
                    " field=" + join(rep.means("field"), "%.4f")};
}

Outcome coupling() {
    const auto c = config("couple");
    const auto rep = coupling_experiment(c.model, c.n0_list, c.replicas, c.epsilons, universe(c));
    const auto d = config("couple_decoupled");
    const auto dec = coupling_experiment(d.model, d.n0_list, d.replicas, d.epsilons, universe(d));
    std::string p;
    for (const auto& e : rep.exceedance)
        p += (p.empty() ? "" : " ") + e.kind + "@" + std::to_string(e.n0) + "=" + fmt("%.2f", e.p_hat);
    const double smax = dec.summary.at("max_S");
    return {rep.all_checks_pass() && smax == 0.0, "P(S>eps) and P(mismatch): " + p + "; decoupled max S=" + fmt("%g", smax)};
}

// Serialised outputs of a few library runs, to compare across thread counts.
std::string library_outputs() {
    std::ostringstream os;
    const OutputHeader h{"acceptance", "0", 0};
    {
        const auto c = config("conservation");
        const auto t = simulate_microscopic(c.model, c.n0, universe(c));
        write_counts_csv(os, h, t);
        write_population(os, t.state_at_step(t.steps));
        write_field_csv(os, t.field->back());
    }
    {
        auto c = config("micro2d");
        const auto t = simulate_microscopic(c.model, c.n0, universe(c));
        write_events_csv(os, h, t);
        write_population(os, t.state_at_step(t.steps));
        write_field_binary(os, t.field->back());
    }
    {
        const auto c = config("yule");
        write_yule_csv(os, h, yule_bound_check(c.model, c.n0, c.model.T, 20, universe(c)));
    }
    {
        auto c = config("meanfield");
        const auto u = universe(c);
        const auto sc = solve_selfconsistent_field(c.model, FieldMode::Macroscopic, u);
        const auto ens = simulate_mass_ensemble(c.model, sc.rho, u, 500);
        for (const auto& p : ens) os << format_double(p.M.back()) << ' ' << format_double(p.X.back()[0]) << '\n';
    }
    return os.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

// Runs every CLI experiment into dir; returns the exit codes.
std::vector<int> run_cli(const fs::path& dir, int threads) {
    const std::vector<std::pair<std::string, std::string>> runs = {
        {"micro", "conservation"}, {"micro", "micro2d"},   {"yule", "yule"},
        {"macro", "order"},        {"hybrid", "meanfield"}, {"mass", "meanfield"},
        {"converge", "converge"},  {"couple", "couple"},   {"couple", "couple_decoupled"}};
    fs::create_directories(dir);
    std::vector<int> codes;
    for (const auto& [sub, cfg] : runs) {
        const fs::path out = dir / (sub + "_" + cfg);
        const std::string cmd = std::string("\"") + PKSIM_CLI + "\" " + sub + " --config \"" + PKSIM_CONFIG_DIR +
                                "/" + cfg + ".cfg\" --out \"" + out.string() + "\" --threads " +
                                std::to_string(threads) + " > \"" + (dir / (sub + "_" + cfg + ".stdout")).string() +
                                "\" 2>&1";
        codes.push_back(std::system(cmd.c_str()));
    }
    return codes;
}

Outcome determinism() {
    omp_set_num_threads(1);
    const std::string a = library_outputs();
    omp_set_num_threads(8);
    const std::string b = library_outputs();
    omp_set_num_threads(omp_get_num_procs());
    const bool lib_same = a == b && !a.empty();

    const fs::path root = fs::temp_directory_path() / ("pksim_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    const auto c1 = run_cli(root / "t1", 1);
    const auto c8 = run_cli(root / "t8", 8);
    bool codes_ok = c1 == c8;
    for (int c : c1) codes_ok = codes_ok && c == 0;

    std::size_t files = 0, differ = 0;
    std::string first_diff;
    for (const auto& e : fs::recursive_directory_iterator(root / "t1")) {
        if (!e.is_regular_file()) continue;
        const fs::path rel = fs::relative(e.path(), root / "t1");
        const fs::path other = root / "t8" / rel;
        ++files;
        if (!fs::exists(other) || slurp(e.path()) != slurp(other)) {
            ++differ;
            if (first_diff.empty()) first_diff = rel.string();
        }
    }
    std::size_t files8 = 0;
    for (const auto& e : fs::recursive_directory_iterator(root / "t8"))
        if (e.is_regular_file()) ++files8;
    const bool ok = lib_same && codes_ok && differ == 0 && files == files8 && files > 0;
    if (ok) fs::remove_all(root);
    std::string d = std::string("library 1 vs 8 threads ") + (lib_same ? "identical" : "DIFFER") +
                    "; cli files compared=" + std::to_string(files) + " differing=" + std::to_string(differ) +
                    " exit codes " + (codes_ok ? "all 0" : "mismatch");
    if (!first_diff.empty()) d += " first=" + first_diff;
    if (!ok) d += " (kept " + root.string() + ")";
    return {ok, d};
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        double limit_s;   // runtime budget; 0 means none
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"conservation", 30, conservation},
        {"yule_bound", 120, yule},
        {"field_fourier_decay", 10, fourier_decay},
        {"strang_order", 60, strang},
        {"mean_field_equality", 600, mean_field},
        {"pde_vs_monte_carlo", 600, pde_vs_mc},
        {"hydrodynamic_trend", 1800, convergence},
        {"pathwise_coupling", 1800, coupling},
        {"determinism", 0, determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit_s > 0 && secs > c.limit_s) {
            o.pass = false;
            o.detail += " over budget";
        }
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << c.name << ": " << o.detail << " ("
                  << fmt("%.1f", secs) << " s)" << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
