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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "pksim/analysis.hpp"
#include "pksim/config.hpp"
#include "pksim/macroscopic.hpp"
#include "pksim/meanfield.hpp"
#include "pksim/microscopic.hpp"
#include "pksim/report.hpp"
#include "pksim/textio.hpp"

namespace fs = std::filesystem;
using namespace pksim;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;
constexpr int kCheckFailed = 4;

struct Context {
    ExperimentConfig cfg;
    OutputHeader header;
    fs::path out;

    NoiseUniverse universe() const { return NoiseUniverse(header.seed, cfg.model.grid.dim); }

    std::ofstream open(const std::string& name, bool binary = false) const {
        std::ofstream f(out / name, binary ? std::ios::binary : std::ios::out);
        if (!f) throw std::runtime_error("cannot write " + (out / name).string());
        return f;
    }
    void json(const std::string& name, const nlohmann::ordered_json& j) const {
        auto f = open(name);
        write_json(f, j);
    }
    void field(const std::string& stem, const Field& fld) const {
        auto c = open(stem + ".csv");
        c << header.csv_line();
        write_field_csv(c, fld);
        auto b = open(stem + ".bin", true);
        write_field_binary(b, fld);
    }
};

std::vector<int> checkpoints(int steps) { return {steps / 3, 2 * steps / 3, steps}; }

int run_micro(const Context& ctx) {
    const auto& m = ctx.cfg.model;
    const auto traj = simulate_microscopic(m, ctx.cfg.n0, ctx.universe());
    {
        auto f = ctx.open("micro_counts.csv");
        write_counts_csv(f, ctx.header, traj);
    }
    {
        auto f = ctx.open("micro_events.csv");
        write_events_csv(f, ctx.header, traj);
    }
    {
        auto f = ctx.open("micro_final.txt");
        f << ctx.header.csv_line();
        write_population(f, traj.state_at_step(traj.steps));
    }
    ctx.field("micro_field", traj.field->back());
    auto j = ctx.header.json();
    j["n0"] = ctx.cfg.n0;
    j["steps"] = traj.steps;
    j["final_live"] = traj.live_counts.back();
    j["max_live"] = traj.max_live;
    j["events"] = traj.events.size();
    bool pass = true;
    if (m.birth.is_zero() && m.death.is_zero()) {
        const bool conserved = std::all_of(traj.live_counts.begin(), traj.live_counts.end(),
                                           [&](std::size_t c) { return c == ctx.cfg.n0; });
        j["checks"]["conservation"] = conserved;
        pass = conserved;
    }
    j["pass"] = pass;
    ctx.json("micro.json", j);
    return pass ? kOk : kCheckFailed;
}

int run_macro(const Context& ctx) {
    const auto& m = ctx.cfg.model;
    PksOptions opt;
    opt.advection = ctx.cfg.advection;
    const auto sol = solve_pks(m, initial_density(m.mu0, m.grid), initial_field(m.rho0, m.grid), m.T, opt);
    {
        auto f = ctx.open("macro_mass.csv");
        f << ctx.header.csv_line() << "step,time,mass\n";
        for (std::size_t k = 0; k < sol.mass.size(); ++k)
            f << k << ',' << format_double(m.dt * double(k)) << ',' << format_double(sol.mass[k]) << '\n';
    }
    ctx.field("macro_density", sol.density.back());
    ctx.field("macro_rho", sol.rho.back());
    auto j = ctx.header.json();
    j["steps"] = sol.mass.size() - 1;
    j["final_mass"] = sol.mass.back();
    j["max_cfl"] = sol.max_cfl;
    j["semi_lagrangian_substeps"] = sol.semi_lagrangian_substeps;
    j["min_density"] = sol.min_density;
    bool pass = true;
    if (ctx.cfg.order_check) {
        const auto o = strang_order(m, m.T, opt);
        j["order"] = {{"dt", o.dt}, {"err_coarse", o.err_coarse}, {"err_fine", o.err_fine}, {"order", o.order}};
        pass = o.order >= 1.8 && o.order <= 2.2;
        j["checks"]["strang_order_in_range"] = pass;
    }
    j["pass"] = pass;
    ctx.json("macro.json", j);
    return pass ? kOk : kCheckFailed;
}

int run_hybrid(const Context& ctx) {
    const auto& m = ctx.cfg.model;
    const auto u = ctx.universe();
    const auto sc = solve_selfconsistent_field(m, ctx.cfg.field_mode, u, ctx.cfg.picard);
    const auto obs = comparison_observables(m.grid);
    const auto cps = checkpoints(m.steps());
    const auto eq = mean_field_equality(m, sc.rho, ctx.cfg.replicas, ctx.cfg.ensemble, obs, cps, u);
    {
        auto f = ctx.open("hybrid_equality.csv");
        f << ctx.header.csv_line() << "step,time,observable,mass_mean,mass_se,branch_mean,branch_se,diff,within\n";
        for (const auto& r : eq.rows)
            f << r.step << ',' << format_double(r.time) << ',' << r.observable << ','
              << format_double(r.mass_mean) << ',' << format_double(r.mass_se) << ','
              << format_double(r.branch_mean) << ',' << format_double(r.branch_se) << ','
              << format_double(r.diff) << ',' << (r.within ? 1 : 0) << '\n';
    }
    ctx.field("hybrid_rho", sc.rho.back());
    auto j = ctx.header.json();
    j["mode"] = ctx.cfg.field_mode == FieldMode::Macroscopic ? "macroscopic" : "picard";
    if (!sc.picard_gaps.empty()) j["picard_gaps"] = sc.picard_gaps;
    j["checks"]["mu_equals_mubar"] = eq.all_within();
    bool pass = eq.all_within();
    if (sc.density) {
        PksSolution pks;
        pks.density = *sc.density;
        const auto ens = simulate_mass_ensemble(m, sc.rho, u, ctx.cfg.ensemble);
        const auto mu = estimate_mu(ens, m.grid.dim, m.dt);
        const auto cmp = compare_with_monte_carlo(pks, mu, obs, cps);
        auto f = ctx.open("hybrid_pde_compare.csv");
        write_comparison_csv(f, ctx.header, cmp);
        j["checks"]["pde_matches_monte_carlo"] = cmp.all_within();
        pass = pass && cmp.all_within();
    }
    j["pass"] = pass;
    ctx.json("hybrid.json", j);
    return pass ? kOk : kCheckFailed;
}

int run_mass(const Context& ctx) {
    const auto& m = ctx.cfg.model;
    const auto u = ctx.universe();
    const auto sc = solve_selfconsistent_field(m, ctx.cfg.field_mode, u, ctx.cfg.picard);
    const auto ens = simulate_mass_ensemble(m, sc.rho, u, ctx.cfg.ensemble);
    const auto mu = estimate_mu(ens, m.grid.dim, m.dt);
    const auto bank = TestFunctionBank::standard(m.grid);
    std::vector<Observable> obs;
    for (std::size_t k = 0; k < bank.size(); ++k) {
        const BumpFunction b = bank[k];
        obs.push_back([b](const Point& x) { return b.value(x); });
    }
    obs.push_back([](const Point&) { return 1.0; });
    {
        auto f = ctx.open("mass_pairings.csv");
        f << ctx.header.csv_line() << "step,time,observable,mean,se\n";
        for (std::size_t k = 0; k < mu.steps(); ++k)
            for (std::size_t j = 0; j < obs.size(); ++j) {
                const auto s = mu.pairing(k, obs[j]);
                f << k << ',' << format_double(m.dt * double(k)) << ',' << j << ',' << format_double(s.mean)
                  << ',' << format_double(s.se) << '\n';
            }
    }
    bool bounds = true;
    for (const auto& p : ens)
        for (std::size_t k = 0; k < p.M.size(); ++k) {
            const double t = m.dt * double(k);
            bounds = bounds && p.M[k] >= std::exp(-m.lambda_bar * t) * (1 - 1e-12) &&
                     p.M[k] <= std::exp(m.lambda_bar * t) * (1 + 1e-12);
        }
    std::vector<double> res(ens.size());
    for (std::size_t r = 0; r < ens.size(); ++r) res[r] = weak_form_residual(ens[r], m, sc.rho, bank[1]);
    const auto rs = summarize(res);
    auto j = ctx.header.json();
    j["ensemble"] = ens.size();
    j["final_mean_mass"] = mu.pairing(mu.steps() - 1, obs.back()).mean;
    j["weak_residual_mean"] = rs.mean;
    j["weak_residual_se"] = rs.se;
    j["checks"]["mass_bounds"] = bounds;
    j["checks"]["weak_form_within_4se"] = std::abs(rs.mean) <= 4 * rs.se;
    const bool pass = bounds && std::abs(rs.mean) <= 4 * rs.se;
    j["pass"] = pass;
    ctx.json("mass.json", j);
    return pass ? kOk : kCheckFailed;
}

int run_converge(const Context& ctx) {
    const auto rep = measure_convergence_experiment(ctx.cfg.model, ctx.cfg.n0_list, ctx.cfg.replicas,
                                                    ctx.universe());
    auto f = ctx.open("converge.csv");
    write_report_csv(f, ctx.header, rep);
    ctx.json("converge.json", report_json(ctx.header, rep));
    return rep.all_checks_pass() ? kOk : kCheckFailed;
}

int run_couple(const Context& ctx) {
    const auto rep = coupling_experiment(ctx.cfg.model, ctx.cfg.n0_list, ctx.cfg.replicas,
                                         ctx.cfg.epsilons, ctx.universe());
    auto f = ctx.open("couple.csv");
    write_report_csv(f, ctx.header, rep);
    ctx.json("couple.json", report_json(ctx.header, rep));
    return rep.all_checks_pass() ? kOk : kCheckFailed;
}

int run_yule(const Context& ctx) {
    const auto rep = yule_bound_check(ctx.cfg.model, ctx.cfg.n0, ctx.cfg.model.T, ctx.cfg.replicas,
                                      ctx.universe());
    auto f = ctx.open("yule.csv");
    write_yule_csv(f, ctx.header, rep);
    ctx.json("yule.json", yule_json(ctx.header, rep));
    return rep.pass ? kOk : kCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pksim: branching-diffusion chemotaxis simulator"};
    app.require_subcommand(1);
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out = ".";
    int threads = 0;
    app.add_option("--config", config_path, "experiment config file")->required();
    app.add_option("--seed", seed, "master seed (overrides run.seed)");
    app.add_option("--out", out, "output directory");
    app.add_option("--threads", threads, "worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);

    struct Sub {
        const char* name;
        const char* help;
        int (*run)(const Context&);
    };
    const Sub subs[] = {
        {"micro", "one individual-based run", run_micro},
        {"macro", "PKS solve", run_macro},
        {"hybrid", "mean-field pipeline: self-consistent field, branching and mass ensembles", run_hybrid},
        {"mass", "(X, M) ensemble", run_mass},
        {"converge", "hydrodynamic-limit experiment", run_converge},
        {"couple", "pathwise coupling experiment", run_couple},
        {"yule", "Yule bound check", run_yule},
    };
    for (const auto& s : subs) app.add_subcommand(s.name, s.help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    omp_set_max_active_levels(1);
    if (threads > 0) omp_set_num_threads(threads);

    try {
        Context ctx;
        ctx.cfg = load_config(config_path);
        ctx.out = out;
        fs::create_directories(ctx.out);
        const Sub* chosen = nullptr;
        for (const auto& s : subs)
            if (app.got_subcommand(s.name)) chosen = &s;
        ctx.header.command = chosen->name;
        ctx.header.config_hash = ctx.cfg.hash_hex();
        ctx.header.seed = seed.value_or(ctx.cfg.seed);
        const int code = chosen->run(ctx);
        if (code == kCheckFailed) std::cerr << "pksim: acceptance check failed, see " << ctx.out.string() << "\n";
        return code;
    } catch (const ConfigInvalid& e) {
        std::cerr << "pksim: invalid config\n";
        for (const auto& [field, msg] : e.diagnostics()) std::cerr << "  " << field << ": " << msg << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "pksim: " << e.what() << "\n";
        return kRuntimeError;
    }
}
