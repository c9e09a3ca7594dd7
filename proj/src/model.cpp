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

#include "pksim/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pksim/errors.hpp"

namespace pksim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

double RateFn::operator()(const Point& x, double s) const {
    return std::visit(overloaded{
                          [](const ConstantRate& f) { return f.c; },
                          [&](const IndicatorRate& f) {
                              const double v = x[f.axis];
                              return (v >= f.lo && v < f.hi) ? f.c : 0.0;
                          },
                          [&](const LogisticRate& f) {
                              return f.c / (1.0 + std::exp(-f.k * (s - f.s0)));
                          },
                      },
                      f_);
}

double RateFn::bound() const {
    return std::visit([](const auto& f) { return f.c; }, f_);
}

bool RateFn::is_zero() const { return bound() == 0.0; }

std::string RateFn::describe() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const ConstantRate& f) { os << "constant c=" << f.c; },
                   [&](const IndicatorRate& f) {
                       os << "indicator c=" << f.c << " lo=" << f.lo << " hi=" << f.hi
                          << " axis=" << f.axis;
                   },
                   [&](const LogisticRate& f) {
                       os << "logistic c=" << f.c << " k=" << f.k << " s0=" << f.s0;
                   },
               },
               f_);
    return os.str();
}

Point DriftFn::operator()(const Point& /*x*/, const Point& g, int dim) const {
    return std::visit(overloaded{
                          [](const ZeroDrift&) { return Point{}; },
                          [](const ConstantDrift& f) { return f.v; },
                          [&](const ChemotaxisDrift& f) {
                              const double gn = norm(g, dim);
                              const double s = f.chi / (1.0 + std::abs(f.chi) * gn / f.bmax);
                              Point b{};
                              for (int a = 0; a < dim; ++a) b[a] = s * g[a];
                              return b;
                          },
                      },
                      f_);
}

double DriftFn::bound(int dim) const {
    return std::visit(overloaded{
                          [](const ZeroDrift&) { return 0.0; },
                          [&](const ConstantDrift& f) { return norm(f.v, dim); },
                          [](const ChemotaxisDrift& f) { return f.bmax; },
                      },
                      f_);
}

bool DriftFn::is_zero() const {
    return std::visit(overloaded{
                          [](const ZeroDrift&) { return true; },
                          [](const ConstantDrift& f) { return f.v[0] == 0.0 && f.v[1] == 0.0; },
                          [](const ChemotaxisDrift& f) { return f.chi == 0.0; },
                      },
                      f_);
}

std::string DriftFn::describe() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const ZeroDrift&) { os << "zero"; },
                   [&](const ConstantDrift& f) { os << "constant vx=" << f.v[0] << " vy=" << f.v[1]; },
                   [&](const ChemotaxisDrift& f) {
                       os << "chemotaxis chi=" << f.chi << " bmax=" << f.bmax;
                   },
               },
               f_);
    return os.str();
}

int ModelParams::steps() const {
    return int(std::llround(T / dt));
}

std::vector<std::pair<std::string, std::string>> ModelParams::violations() const {
    std::vector<std::pair<std::string, std::string>> v;
    auto need = [&](bool ok, const char* field, const char* msg) {
        if (!ok) v.emplace_back(field, msg);
    };
    auto pos = [](double x) { return x > 0.0 && std::isfinite(x); };
    need(grid.dim == 1 || grid.dim == 2, "grid.d", "must be 1 or 2");
    need(grid.n >= 4 && grid.n <= 4096 && (grid.n & (grid.n - 1)) == 0, "grid.n",
         "must be a power of two in [4, 4096]");
    need(pos(grid.L), "grid.L", "must be positive");
    need(pos(sigma), "model.sigma", "must be positive");
    need(pos(D), "model.D", "must be positive");
    need(pos(r), "model.r", "must be positive");
    need(alpha >= 0.0 && std::isfinite(alpha), "model.alpha", "must be non-negative");
    need(pos(lambda_bar), "model.lambda_bar", "must be positive");
    need(pos(dt), "time.dt", "must be positive");
    need(T >= 0.0 && std::isfinite(T), "time.T", "must be non-negative");
    if (pos(dt) && T >= 0.0)
        need(std::abs(steps() * dt - T) <= 1e-9 * std::max(1.0, T), "time.T",
             "must be an integer multiple of time.dt");
    need(pos(kernel_width_cells), "kernel.width_cells", "must be positive");
    need(birth.bound() >= 0.0, "rates.birth", "must be non-negative");
    need(death.bound() >= 0.0, "rates.death", "must be non-negative");
    need(birth.bound() + death.bound() <= lambda_bar, "model.lambda_bar",
         "must dominate sup(birth + death)");
    if (const auto* ind = std::get_if<IndicatorRate>(&birth.variant()))
        need(ind->axis >= 0 && ind->axis < grid.dim, "rates.birth", "axis out of range");
    if (const auto* ind = std::get_if<IndicatorRate>(&death.variant()))
        need(ind->axis >= 0 && ind->axis < grid.dim, "rates.death", "axis out of range");
    need(std::isfinite(drift.bound(grid.dim)) && drift.bound(grid.dim) >= 0.0, "drift",
         "needs a finite bound");
    need(population_cap > 0, "run.cap", "must be positive");
    return v;
}

void ModelParams::validate() const {
    const auto v = violations();
    if (v.empty()) return;
    std::string msg;
    for (const auto& [field, what] : v) {
        if (!msg.empty()) msg += "; ";
        msg += field + ": " + what;
    }
    throw InvalidArgument(msg);
}

Point sample_founder(const InitialLaw& law, const GridSpec& grid, const NoiseUniverse& u,
                     std::uint32_t line, Purpose purpose) {
    const Stream s = u.stream(LineageIndex(line), purpose);
    return std::visit(overloaded{
                          [](const PointLaw& p) { return p.x0; },
                          [&](const UniformLaw&) {
                              Point x{};
                              for (int a = 0; a < grid.dim; ++a) x[a] = grid.L * s.uniform(a);
                              return x;
                          },
                          [&](const GaussianLaw& g) {
                              const auto z = s.normal_pair(0);
                              Point x{};
                              for (int a = 0; a < grid.dim; ++a) x[a] = g.center[a] + g.std * z[a];
                              return x;
                          },
                      },
                      law);
}

namespace {

double min_image(double d, double L) { return d - L * std::round(d / L); }

} // namespace

Field initial_density(const InitialLaw& law, const GridSpec& grid) {
    Field f(grid, 0.0);
    std::visit(overloaded{
                   [&](const PointLaw& p) {
                       const Point x = grid.wrap(p.x0);
                       std::size_t flat = 0;
                       for (int a = 0; a < grid.dim; ++a) {
                           const auto j = std::size_t(std::llround(x[a] / grid.h())) % std::size_t(grid.n);
                           flat = flat * std::size_t(grid.n) + j;
                       }
                       f.values[flat] = 1.0 / grid.cell_volume();
                   },
                   [&](const UniformLaw&) {
                       for (double& v : f.values) v = 1.0 / std::pow(grid.L, grid.dim);
                   },
                   [&](const GaussianLaw& g) {
                       double s = 0.0;
                       for (std::size_t m = 0; m < f.values.size(); ++m) {
                           const Point x = grid.node(m);
                           double v = 1.0;
                           for (int a = 0; a < grid.dim; ++a) {
                               // Wrapped normal: sum a few images.
                               double acc = 0.0;
                               for (int k = -3; k <= 3; ++k) {
                                   const double d = x[a] - g.center[a] + k * grid.L;
                                   acc += std::exp(-0.5 * d * d / (g.std * g.std));
                               }
                               v *= acc;
                           }
                           f.values[m] = v;
                           s += v;
                       }
                       const double scale = 1.0 / (s * grid.cell_volume());
                       for (double& v : f.values) v *= scale;
                   },
               },
               law);
    return f;
}

Field initial_field(const InitialProfile& profile, const GridSpec& grid) {
    Field f(grid, 0.0);
    const double w = 2.0 * std::numbers::pi / grid.L;
    for (std::size_t m = 0; m < f.values.size(); ++m) {
        const Point x = grid.node(m);
        f.values[m] = std::visit(
            overloaded{
                [](const ZeroProfile&) { return 0.0; },
                [](const ConstantProfile& p) { return p.c; },
                [&](const CosineProfile& p) {
                    double v = p.offset;
                    for (int a = 0; a < grid.dim; ++a) v += p.amp * std::cos(w * p.mode * x[a]);
                    return v;
                },
                [&](const GaussianProfile& p) {
                    double r2 = 0.0;
                    for (int a = 0; a < grid.dim; ++a) {
                        const double d = min_image(x[a] - p.center[a], grid.L);
                        r2 += d * d;
                    }
                    return p.amp * std::exp(-0.5 * r2 / (p.std * p.std));
                },
            },
            profile);
    }
    return f;
}

} // namespace pksim
