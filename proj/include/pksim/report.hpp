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
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "pksim/analysis.hpp"
#include "pksim/macroscopic.hpp"
#include "pksim/microscopic.hpp"

namespace pksim {

// Provenance echoed at the top of every text output.
struct OutputHeader {
    std::string command;
    std::string config_hash;
    std::uint64_t seed = 0;

    // "# pksim <command> config_hash=<hex> seed=<u64>\n"
    std::string csv_line() const;
    nlohmann::ordered_json json() const;
};

// kind,n0,replica,stat,value,se,lo,hi. Per-replica rows carry stat=value;
// aggregate rows use replica=-1.
void write_report_csv(std::ostream& os, const OutputHeader& h, const ConvergenceReport& rep);
nlohmann::ordered_json report_json(const OutputHeader& h, const ConvergenceReport& rep);

void write_yule_csv(std::ostream& os, const OutputHeader& h, const YuleReport& rep);
nlohmann::ordered_json yule_json(const OutputHeader& h, const YuleReport& rep);

void write_comparison_csv(std::ostream& os, const OutputHeader& h, const ComparisonReport& rep);

void write_events_csv(std::ostream& os, const OutputHeader& h, const BranchingTrajectory& traj);
void write_counts_csv(std::ostream& os, const OutputHeader& h, const BranchingTrajectory& traj);

void write_json(std::ostream& os, const nlohmann::ordered_json& j);

} // namespace pksim
