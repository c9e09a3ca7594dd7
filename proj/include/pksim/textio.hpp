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

#include <iosfwd>
#include <string>

#include "pksim/population.hpp"

namespace pksim {

// Line-oriented snapshot format, one cell per line:
//   line word_bits word_len birth death x1 .. xd
// with the positional fields replaced by the single token `dead` for a dead
// cell and infinite times written as `inf`. Lines starting with '#' are
// comments. Numbers use 17 significant digits so parsing round-trips exactly.
void write_population(std::ostream& os, const PopulationState& pop);
PopulationState read_population(std::istream& is, int dim, double time);

// Empirical measures: one atom per line, `weight x1 .. xd`.
void write_measure(std::ostream& os, const EmpiricalMeasure& m);
EmpiricalMeasure read_measure(std::istream& is, int dim);

std::string format_double(double v);

} // namespace pksim
