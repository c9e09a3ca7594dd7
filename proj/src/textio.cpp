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

#include "pksim/textio.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "pksim/errors.hpp"

namespace pksim {

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

double parse_double(const std::string& tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') throw ParseError("not a number: '" + tok + "'");
    return v;
}

bool next_record(std::istream& is, std::istringstream& line) {
    std::string text;
    while (std::getline(is, text)) {
        const auto first = text.find_first_not_of(" \t\r");
        if (first == std::string::npos || text[first] == '#') continue;
        line.clear();
        line.str(text);
        return true;
    }
    return false;
}

} // namespace

void write_population(std::ostream& os, const PopulationState& pop) {
    for (const auto& [idx, rec] : pop.cells()) {
        os << idx.line() << ' ' << idx.bits() << ' ' << idx.length() << ' '
           << format_double(rec.birth_time) << ' ' << format_double(rec.death_time);
        if (rec.alive()) {
            for (int a = 0; a < pop.dim(); ++a) os << ' ' << format_double((*rec.position)[a]);
        } else {
            os << " dead";
        }
        os << '\n';
    }
}

PopulationState read_population(std::istream& is, int dim, double time) {
    PopulationState pop(dim, time);
    std::istringstream line;
    while (next_record(is, line)) {
        std::uint64_t ln = 0, bits = 0;
        int len = 0;
        std::string birth, death, x0;
        if (!(line >> ln >> bits >> len >> birth >> death >> x0))
            throw ParseError("truncated population record");
        CellRecord rec;
        rec.birth_time = parse_double(birth);
        rec.death_time = parse_double(death);
        if (x0 != "dead") {
            Point p{};
            p[0] = parse_double(x0);
            for (int a = 1; a < dim; ++a) {
                std::string tok;
                if (!(line >> tok)) throw ParseError("missing coordinate");
                p[a] = parse_double(tok);
            }
            rec.position = p;
        }
        pop.set(LineageIndex(std::uint32_t(ln), bits, len), rec);
    }
    return pop;
}

void write_measure(std::ostream& os, const EmpiricalMeasure& m) {
    for (const auto& a : m.atoms()) {
        os << format_double(a.weight);
        for (int k = 0; k < m.dim(); ++k) os << ' ' << format_double(a.position[k]);
        os << '\n';
    }
}

EmpiricalMeasure read_measure(std::istream& is, int dim) {
    EmpiricalMeasure m(dim);
    std::istringstream line;
    while (next_record(is, line)) {
        std::string tok;
        if (!(line >> tok)) throw ParseError("empty measure record");
        const double w = parse_double(tok);
        Point p{};
        for (int a = 0; a < dim; ++a) {
            if (!(line >> tok)) throw ParseError("missing coordinate");
            p[a] = parse_double(tok);
        }
        m.add(p, w);
    }
    return m;
}

} // namespace pksim
