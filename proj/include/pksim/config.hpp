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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pksim/errors.hpp"
#include "pksim/macroscopic.hpp"
#include "pksim/meanfield.hpp"
#include "pksim/model.hpp"

namespace pksim {

class ConfigInvalid : public Error {
public:
    using Diagnostic = std::pair<std::string, std::string>;   // (field, message)
    explicit ConfigInvalid(std::vector<Diagnostic> diags);
    const std::vector<Diagnostic>& diagnostics() const { return diags_; }

private:
    std::vector<Diagnostic> diags_;
};

// Flat "key = value" file with dotted sections; '#' starts a comment.
// Functions are written as a registry name followed by key=value arguments:
//   rates.birth = logistic c=0.6 k=4 s0=0.3
//   drift       = chemotaxis chi=2 bmax=1
//   init.mu0    = gaussian cx=5 std=1
struct ExperimentConfig {
    ModelParams model;
    std::uint64_t n0 = 100;
    std::vector<std::uint64_t> n0_list{16, 64, 256, 1024};
    std::size_t replicas = 20;
    std::uint64_t seed = 1;
    std::vector<double> epsilons{0.05, 0.2};
    AdvectionScheme advection = AdvectionScheme::Auto;
    bool order_check = false;
    FieldMode field_mode = FieldMode::Macroscopic;
    std::size_t ensemble = 10000;
    PicardOptions picard;

    std::map<std::string, std::string> entries;   // as parsed, trimmed
    std::uint64_t hash() const;                   // FNV-1a over sorted entries
    std::string hash_hex() const;
};

ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::string& path);

} // namespace pksim
