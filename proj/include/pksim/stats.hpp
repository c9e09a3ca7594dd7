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

#include <cstddef>
#include <span>
#include <vector>

namespace pksim {

struct SampleStats {
    std::size_t count = 0;
    double mean = 0.0;
    double se = 0.0;   // standard error of the mean; 0 for a single sample
    double stddev = 0.0;
};

SampleStats summarize(std::span<const double> xs);

// Linear interpolation between order statistics, q in [0, 1].
double quantile(std::vector<double> xs, double q);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Wilson score interval for k successes out of n; z = 1.96 gives 95%.
Interval wilson_interval(std::size_t k, std::size_t n, double z = 1.959963984540054);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

} // namespace pksim
