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
#include <string>
#include <variant>
#include <vector>

#include "pksim/field.hpp"
#include "pksim/grid.hpp"
#include "pksim/noise.hpp"
#include "pksim/population.hpp"

namespace pksim {

// Rate functions lambda(x, s) >= 0 of a wrapped position and a scalar field
// argument s (the concentration, or |grad rho| when so configured).
struct ConstantRate {
    double c = 0.0;
};
// c on the slab lo <= x[axis] < hi, zero elsewhere.
struct IndicatorRate {
    double c = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    int axis = 0;
};
// c / (1 + exp(-k (s - s0))); k < 0 gives a decreasing response.
struct LogisticRate {
    double c = 0.0;
    double k = 1.0;
    double s0 = 0.0;
};

class RateFn {
public:
    using Variant = std::variant<ConstantRate, IndicatorRate, LogisticRate>;

    RateFn() : f_(ConstantRate{0.0}) {}
    RateFn(Variant f) : f_(f) {}
    RateFn(ConstantRate f) : f_(f) {}
    RateFn(IndicatorRate f) : f_(f) {}
    RateFn(LogisticRate f) : f_(f) {}

    double operator()(const Point& x, double s) const;
    // Certified sup over all arguments.
    double bound() const;
    bool is_zero() const;
    std::string describe() const;
    const Variant& variant() const { return f_; }

private:
    Variant f_;
};

// Drift b(x, g) with g = grad rho at x.
struct ZeroDrift {};
struct ConstantDrift {
    Point v{};
};
// chi g / (1 + chi |g| / bmax): linear chemotaxis saturating at bmax.
struct ChemotaxisDrift {
    double chi = 1.0;
    double bmax = 1.0;
};

class DriftFn {
public:
    using Variant = std::variant<ZeroDrift, ConstantDrift, ChemotaxisDrift>;

    DriftFn() : f_(ZeroDrift{}) {}
    DriftFn(Variant f) : f_(f) {}
    DriftFn(ZeroDrift f) : f_(f) {}
    DriftFn(ConstantDrift f) : f_(f) {}
    DriftFn(ChemotaxisDrift f) : f_(f) {}

    Point operator()(const Point& x, const Point& grad, int dim) const;
    double bound(int dim) const;
    bool is_zero() const;
    std::string describe() const;

private:
    Variant f_;
};

enum class LambdaArg { Rho, GradRhoNorm };

// Initial law of founders.
struct PointLaw {
    Point x0{};
};
struct UniformLaw {};
struct GaussianLaw {
    Point center{};
    double std = 1.0;
};
using InitialLaw = std::variant<PointLaw, UniformLaw, GaussianLaw>;

// Initial chemoattractant.
struct ZeroProfile {};
struct ConstantProfile {
    double c = 0.0;
};
// offset + amp * sum_axes cos(2 pi mode x_a / L)
struct CosineProfile {
    double amp = 0.0;
    int mode = 1;
    double offset = 0.0;
};
struct GaussianProfile {
    Point center{};
    double std = 1.0;
    double amp = 1.0;
};
using InitialProfile = std::variant<ZeroProfile, ConstantProfile, CosineProfile, GaussianProfile>;

struct ModelParams {
    double sigma = 1.0;
    double D = 1.0;
    double r = 1.0;
    double alpha = 0.0;
    double lambda_bar = 1.0;
    LambdaArg lambda_arg = LambdaArg::Rho;
    RateFn birth;
    RateFn death;
    DriftFn drift;
    GridSpec grid;
    double kernel_width_cells = 4.0;
    double dt = 0.01;
    double T = 1.0;
    InitialLaw mu0 = UniformLaw{};
    InitialProfile rho0 = ZeroProfile{};
    std::size_t population_cap = 1000000;

    int dim() const { return grid.dim; }
    int steps() const;
    Kernel kernel() const { return Kernel::with_width_cells(grid, kernel_width_cells); }

    // Net rate lambda_b - lambda_d and the two rates at (x, s).
    double net_rate(const Point& x, double s) const { return birth(x, s) - death(x, s); }

    // Collects every violated constraint as (field, message).
    std::vector<std::pair<std::string, std::string>> violations() const;
    // Throws InvalidArgument listing all violations.
    void validate() const;
};

// Scalar argument handed to the rate functions.
inline double rate_argument(LambdaArg arg, double rho, const Point& grad, int dim) {
    return arg == LambdaArg::Rho ? rho : norm(grad, dim);
}

// Founder of line i drawn from the reserved init stream of (i, root).
Point sample_founder(const InitialLaw& law, const GridSpec& grid, const NoiseUniverse& u,
                     std::uint32_t line, Purpose purpose = Purpose::Init);
// Grid density of the initial law (a node spike for a point mass).
Field initial_density(const InitialLaw& law, const GridSpec& grid);
Field initial_field(const InitialProfile& profile, const GridSpec& grid);

} // namespace pksim
