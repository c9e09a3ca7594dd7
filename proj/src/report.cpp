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

#include "pksim/report.hpp"

#include <ostream>

#include "pksim/textio.hpp"

namespace pksim {

namespace {

std::string fmt(double v) { return format_double(v); }

} // namespace

std::string OutputHeader::csv_line() const {
    return "# pksim " + command + " config_hash=" + config_hash + " seed=" + std::to_string(seed) + "\n";
}

nlohmann::ordered_json OutputHeader::json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["config_hash"] = config_hash;
    j["seed"] = seed;
    return j;
}

void write_report_csv(std::ostream& os, const OutputHeader& h, const ConvergenceReport& rep) {
    os << h.csv_line() << "kind,n0,replica,stat,value,se,lo,hi\n";
    for (const auto& r : rep.rows) {
        for (std::size_t i = 0; i < r.values.size(); ++i)
            os << r.kind << ',' << r.n0 << ',' << i << ",value," << fmt(r.values[i]) << ",,,\n";
        os << r.kind << ',' << r.n0 << ",-1,mean," << fmt(r.stats.mean) << ',' << fmt(r.stats.se) << ','
           << fmt(r.q10) << ',' << fmt(r.q90) << '\n';
        os << r.kind << ',' << r.n0 << ",-1,median," << fmt(r.q50) << ",,,\n";
    }
    for (const auto& e : rep.exceedance)
        os << e.kind << ',' << e.n0 << ",-1,p_exceed," << fmt(e.p_hat) << ",," << fmt(e.wilson.lo) << ','
           << fmt(e.wilson.hi) << '\n';
}

nlohmann::ordered_json report_json(const OutputHeader& h, const ConvergenceReport& rep) {
    auto j = h.json();
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : rep.rows)
        rows.push_back({{"kind", r.kind},
                        {"n0", r.n0},
                        {"replicas", r.values.size()},
                        {"mean", r.stats.mean},
                        {"se", r.stats.se},
                        {"q10", r.q10},
                        {"q50", r.q50},
                        {"q90", r.q90}});
    j["rows"] = rows;
    nlohmann::ordered_json ex = nlohmann::ordered_json::array();
    for (const auto& e : rep.exceedance)
        ex.push_back({{"kind", e.kind},
                      {"n0", e.n0},
                      {"epsilon", e.epsilon},
                      {"exceed", e.exceed},
                      {"replicas", e.replicas},
                      {"p_hat", e.p_hat},
                      {"wilson_lo", e.wilson.lo},
                      {"wilson_hi", e.wilson.hi}});
    j["exceedance"] = ex;
    j["summary"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : rep.summary) j["summary"][k] = v;
    j["checks"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : rep.checks) j["checks"][k] = v;
    j["pass"] = rep.all_checks_pass();
    return j;
}

void write_yule_csv(std::ostream& os, const OutputHeader& h, const YuleReport& rep) {
    os << h.csv_line() << "kind,n0,replica,stat,value,se,lo,hi\n";
    for (std::size_t i = 0; i < rep.replicas; ++i) {
        os << "yule," << rep.n0 << ',' << i << ",sup_ratio," << fmt(rep.sup_ratio[i]) << ",,,\n";
        os << "yule," << rep.n0 << ',' << i << ",final_ratio," << fmt(rep.final_ratio[i]) << ",,,\n";
    }
    os << "yule," << rep.n0 << ",-1,sup_ratio_mean," << fmt(rep.sup_stats.mean) << ','
       << fmt(rep.sup_stats.se) << ",,\n";
    os << "yule," << rep.n0 << ",-1,final_ratio_mean," << fmt(rep.final_stats.mean) << ','
       << fmt(rep.final_stats.se) << ",,\n";
    os << "yule," << rep.n0 << ",-1,bound," << fmt(rep.bound) << ",,,\n";
}

nlohmann::ordered_json yule_json(const OutputHeader& h, const YuleReport& rep) {
    auto j = h.json();
    j["n0"] = rep.n0;
    j["T"] = rep.T;
    j["replicas"] = rep.replicas;
    j["sup_ratio_mean"] = rep.sup_stats.mean;
    j["sup_ratio_se"] = rep.sup_stats.se;
    j["final_ratio_mean"] = rep.final_stats.mean;
    j["final_ratio_se"] = rep.final_stats.se;
    j["bound"] = rep.bound;
    j["pass"] = rep.pass;
    return j;
}

void write_comparison_csv(std::ostream& os, const OutputHeader& h, const ComparisonReport& rep) {
    os << h.csv_line() << "step,time,observable,pde,mc,se,diff,within\n";
    for (const auto& r : rep.rows)
        os << r.step << ',' << fmt(r.time) << ',' << r.observable << ',' << fmt(r.pde) << ','
           << fmt(r.mc) << ',' << fmt(r.se) << ',' << fmt(r.diff) << ',' << (r.within ? 1 : 0) << '\n';
}

void write_events_csv(std::ostream& os, const OutputHeader& h, const BranchingTrajectory& traj) {
    os << h.csv_line() << "time,line,word_bits,word_len,kind";
    for (int a = 0; a < traj.dim; ++a) os << ",x" << a + 1;
    os << '\n';
    for (const auto& e : traj.events) {
        os << fmt(e.time) << ',' << e.id.line() << ',' << e.id.bits() << ',' << e.id.length() << ','
           << (e.kind == EventKind::Branch ? "branch" : "death");
        for (int a = 0; a < traj.dim; ++a) os << ',' << fmt(e.position[a]);
        os << '\n';
    }
}

void write_counts_csv(std::ostream& os, const OutputHeader& h, const BranchingTrajectory& traj) {
    os << h.csv_line() << "step,time,live\n";
    for (std::size_t k = 0; k < traj.live_counts.size(); ++k)
        os << k << ',' << fmt(traj.time_at(int(k))) << ',' << traj.live_counts[k] << '\n';
}

void write_json(std::ostream& os, const nlohmann::ordered_json& j) { os << j.dump(2) << '\n'; }

} // namespace pksim
