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

#include "pksim/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace pksim {

namespace {

std::string join(const std::vector<ConfigInvalid::Diagnostic>& d) {
    std::string s;
    for (const auto& [f, m] : d) {
        if (!s.empty()) s += "; ";
        s += f + ": " + m;
    }
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

class Reader {
public:
    explicit Reader(std::map<std::string, std::string> e) : e_(std::move(e)) {}

    std::vector<ConfigInvalid::Diagnostic> diags;

    bool has(const std::string& k) const { return e_.count(k) != 0; }

    void number(const std::string& k, double& out, bool required = false) {
        used_.insert(k);
        auto it = e_.find(k);
        if (it == e_.end()) {
            if (required) diags.emplace_back(k, "missing");
            return;
        }
        if (!parse_double(it->second, out)) diags.emplace_back(k, "not a number: '" + it->second + "'");
    }
    template <class Int>
    void integer(const std::string& k, Int& out) {
        used_.insert(k);
        auto it = e_.find(k);
        if (it == e_.end()) return;
        if (!parse_int(it->second, out)) diags.emplace_back(k, "not a non-negative integer: '" + it->second + "'");
    }
    bool text(const std::string& k, std::string& out) {
        used_.insert(k);
        auto it = e_.find(k);
        if (it == e_.end()) return false;
        out = it->second;
        return true;
    }

    // "name a=1 b=2" -> name and argument map; reports unknown arguments.
    bool function(const std::string& k, std::string& name, std::map<std::string, double>& args,
                  const std::map<std::string, std::set<std::string>>& registry) {
        std::string v;
        if (!text(k, v)) return false;
        const auto parts = split(v, ' ');
        if (parts.empty()) {
            diags.emplace_back(k, "empty function");
            return false;
        }
        name = parts[0];
        auto reg = registry.find(name);
        if (reg == registry.end()) {
            std::string names;
            for (const auto& [n, _] : registry) names += (names.empty() ? "" : ", ") + n;
            diags.emplace_back(k, "unknown function '" + name + "' (known: " + names + ")");
            return false;
        }
        bool ok = true;
        for (std::size_t i = 1; i < parts.size(); ++i) {
            const auto eq = parts[i].find('=');
            double x = 0.0;
            if (eq == std::string::npos || !parse_double(parts[i].substr(eq + 1), x)) {
                diags.emplace_back(k, "bad argument '" + parts[i] + "'");
                ok = false;
                continue;
            }
            const std::string a = parts[i].substr(0, eq);
            if (!reg->second.count(a)) {
                diags.emplace_back(k, "unknown argument '" + a + "' for " + name);
                ok = false;
                continue;
            }
            args[a] = x;
        }
        return ok;
    }

    void unknown_keys() {
        for (const auto& [k, _] : e_)
            if (!used_.count(k)) diags.emplace_back(k, "unknown key");
    }

    static bool parse_double(const std::string& s, double& out) {
        const std::string t = trim(s);
        if (t.empty()) return false;
        char* end = nullptr;
        const double v = std::strtod(t.c_str(), &end);
        if (end != t.c_str() + t.size() || !std::isfinite(v)) return false;
        out = v;
        return true;
    }
    template <class Int>
    static bool parse_int(const std::string& s, Int& out) {
        const std::string t = trim(s);
        Int v{};
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || p != t.data() + t.size()) return false;
        out = v;
        return true;
    }

private:
    std::map<std::string, std::string> e_;
    std::set<std::string> used_;
};

double arg(const std::map<std::string, double>& a, const char* k, double dflt) {
    auto it = a.find(k);
    return it == a.end() ? dflt : it->second;
}

const std::map<std::string, std::set<std::string>> kRates{
    {"constant", {"c"}},
    {"indicator", {"c", "lo", "hi", "axis"}},
    {"logistic", {"c", "k", "s0"}},
};
const std::map<std::string, std::set<std::string>> kDrifts{
    {"zero", {}},
    {"constant", {"vx", "vy"}},
    {"chemotaxis", {"chi", "bmax"}},
};
const std::map<std::string, std::set<std::string>> kLaws{
    {"uniform", {}},
    {"point", {"x", "y"}},
    {"gaussian", {"cx", "cy", "std"}},
};
const std::map<std::string, std::set<std::string>> kProfiles{
    {"zero", {}},
    {"constant", {"c"}},
    {"cosine", {"amp", "mode", "offset"}},
    {"gaussian", {"cx", "cy", "std", "amp"}},
};

void read_rate(Reader& r, const std::string& key, RateFn& out) {
    std::string name;
    std::map<std::string, double> a;
    if (!r.function(key, name, a, kRates)) return;
    if (name == "constant")
        out = ConstantRate{arg(a, "c", 0.0)};
    else if (name == "indicator")
        out = IndicatorRate{arg(a, "c", 0.0), arg(a, "lo", 0.0), arg(a, "hi", 0.0), int(arg(a, "axis", 0.0))};
    else
        out = LogisticRate{arg(a, "c", 0.0), arg(a, "k", 1.0), arg(a, "s0", 0.0)};
}

} // namespace

ConfigInvalid::ConfigInvalid(std::vector<Diagnostic> diags)
    : Error("ConfigInvalid: " + join(diags)), diags_(std::move(diags)) {}

ExperimentConfig parse_config(std::istream& is) {
    std::map<std::string, std::string> entries;
    std::vector<ConfigInvalid::Diagnostic> early;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            early.emplace_back("line " + std::to_string(lineno), "expected 'key = value'");
            continue;
        }
        const std::string k = trim(line.substr(0, eq));
        const std::string v = trim(line.substr(eq + 1));
        if (k.empty()) {
            early.emplace_back("line " + std::to_string(lineno), "empty key");
            continue;
        }
        if (!entries.emplace(k, v).second) early.emplace_back(k, "duplicate key");
    }

    ExperimentConfig c;
    c.entries = entries;
    Reader r(entries);
    r.diags = early;
    ModelParams& m = c.model;

    r.integer("grid.d", m.grid.dim);
    r.integer("grid.n", m.grid.n);
    r.number("grid.L", m.grid.L);
    r.number("model.sigma", m.sigma);
    r.number("model.D", m.D);
    r.number("model.r", m.r);
    r.number("model.alpha", m.alpha);
    r.number("model.lambda_bar", m.lambda_bar, true);
    std::string s;
    if (r.text("model.lambda_arg", s)) {
        if (s == "rho")
            m.lambda_arg = LambdaArg::Rho;
        else if (s == "grad_rho_norm")
            m.lambda_arg = LambdaArg::GradRhoNorm;
        else
            r.diags.emplace_back("model.lambda_arg", "expected rho or grad_rho_norm");
    }
    r.number("kernel.width_cells", m.kernel_width_cells);
    r.number("time.dt", m.dt);
    r.number("time.T", m.T);
    r.integer("run.cap", m.population_cap);
    read_rate(r, "rates.birth", m.birth);
    read_rate(r, "rates.death", m.death);
    {
        std::string name;
        std::map<std::string, double> a;
        if (r.function("drift", name, a, kDrifts)) {
            if (name == "zero")
                m.drift = ZeroDrift{};
            else if (name == "constant")
                m.drift = ConstantDrift{Point{arg(a, "vx", 0.0), arg(a, "vy", 0.0)}};
            else {
                if (arg(a, "bmax", 1.0) <= 0.0) r.diags.emplace_back("drift", "bmax must be positive");
                m.drift = ChemotaxisDrift{arg(a, "chi", 1.0), arg(a, "bmax", 1.0)};
            }
        }
    }
    {
        std::string name;
        std::map<std::string, double> a;
        if (r.function("init.mu0", name, a, kLaws)) {
            if (name == "uniform")
                m.mu0 = UniformLaw{};
            else if (name == "point")
                m.mu0 = PointLaw{Point{arg(a, "x", 0.0), arg(a, "y", 0.0)}};
            else {
                if (arg(a, "std", 1.0) <= 0.0) r.diags.emplace_back("init.mu0", "std must be positive");
                m.mu0 = GaussianLaw{Point{arg(a, "cx", 0.0), arg(a, "cy", 0.0)}, arg(a, "std", 1.0)};
            }
        }
    }
    {
        std::string name;
        std::map<std::string, double> a;
        if (r.function("init.rho0", name, a, kProfiles)) {
            if (name == "zero")
                m.rho0 = ZeroProfile{};
            else if (name == "constant")
                m.rho0 = ConstantProfile{arg(a, "c", 0.0)};
            else if (name == "cosine")
                m.rho0 = CosineProfile{arg(a, "amp", 0.0), int(arg(a, "mode", 1.0)), arg(a, "offset", 0.0)};
            else {
                if (arg(a, "std", 1.0) <= 0.0) r.diags.emplace_back("init.rho0", "std must be positive");
                m.rho0 = GaussianProfile{Point{arg(a, "cx", 0.0), arg(a, "cy", 0.0)}, arg(a, "std", 1.0),
                                         arg(a, "amp", 1.0)};
            }
        }
    }

    r.integer("run.n0", c.n0);
    r.integer("run.replicas", c.replicas);
    r.integer("run.seed", c.seed);
    if (r.text("run.n0_list", s)) {
        c.n0_list.clear();
        for (const auto& t : split(s, ',')) {
            std::uint64_t v = 0;
            if (!Reader::parse_int(t, v) || v == 0)
                r.diags.emplace_back("run.n0_list", "bad entry '" + t + "'");
            else
                c.n0_list.push_back(v);
        }
    }
    if (r.text("run.epsilons", s)) {
        c.epsilons.clear();
        for (const auto& t : split(s, ',')) {
            double v = 0.0;
            if (!Reader::parse_double(t, v) || v <= 0.0)
                r.diags.emplace_back("run.epsilons", "bad entry '" + t + "'");
            else
                c.epsilons.push_back(v);
        }
    }
    if (r.text("macro.advection", s)) {
        if (s == "auto")
            c.advection = AdvectionScheme::Auto;
        else if (s == "upwind")
            c.advection = AdvectionScheme::Upwind;
        else if (s == "semi_lagrangian")
            c.advection = AdvectionScheme::SemiLagrangian;
        else
            r.diags.emplace_back("macro.advection", "expected auto, upwind or semi_lagrangian");
    }
    if (r.text("macro.order_check", s)) {
        if (s == "true")
            c.order_check = true;
        else if (s == "false")
            c.order_check = false;
        else
            r.diags.emplace_back("macro.order_check", "expected true or false");
    }
    if (r.text("meanfield.mode", s)) {
        if (s == "macroscopic")
            c.field_mode = FieldMode::Macroscopic;
        else if (s == "picard")
            c.field_mode = FieldMode::Picard;
        else
            r.diags.emplace_back("meanfield.mode", "expected macroscopic or picard");
    }
    r.integer("meanfield.ensemble", c.ensemble);
    r.integer("picard.replicas", c.picard.replicas);
    r.integer("picard.max_iters", c.picard.max_iters);
    r.number("picard.tol", c.picard.tol);
    r.unknown_keys();

    if (r.diags.empty()) {
        for (auto& d : m.violations()) r.diags.push_back(std::move(d));
        if (c.n0 == 0) r.diags.emplace_back("run.n0", "must be positive");
        if (c.replicas == 0) r.diags.emplace_back("run.replicas", "must be positive");
        if (c.ensemble == 0) r.diags.emplace_back("meanfield.ensemble", "must be positive");
    }
    if (!r.diags.empty()) throw ConfigInvalid(r.diags);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigInvalid({{"--config", "cannot open '" + path + "'"}});
    return parse_config(f);
}

std::uint64_t ExperimentConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& [k, v] : entries) {
        for (char ch : k + "=" + v + "\n") {
            h ^= std::uint8_t(ch);
            h *= 0x100000001b3ull;
        }
    }
    return h;
}

std::string ExperimentConfig::hash_hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
    return buf;
}

} // namespace pksim
