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


#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <omp.h>

#include "pksim/errors.hpp"
#include "pksim/field.hpp"
#include "pksim/kernels.hpp"

using namespace pksim;

namespace {

constexpr double kPi = std::numbers::pi;

double min_image(double x, double L) {
    x = std::fmod(x, L);
    if (x < 0) x += L;
    return x > 0.5 * L ? x - L : x;
}

EmpiricalMeasure random_measure(int dim, double L, std::size_t atoms, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> pos(0.0, L), w(0.0, 1.0);
    EmpiricalMeasure m(dim);
    for (std::size_t i = 0; i < atoms; ++i) m.add({pos(gen), dim == 2 ? pos(gen) : 0.0}, w(gen));
    return m;
}

Field cosine_mode(const GridSpec& g, int m0, int m1, double amp) {
    Field f(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Point x = g.node(i);
        f.values[i] = amp * std::cos(2 * kPi * (m0 * x[0] + (g.dim == 2 ? m1 * x[1] : 0.0)) / g.L);
    }
    return f;
}

} // namespace

TEST_CASE("grid validation") {
    CHECK_NOTHROW(GridSpec{1, 64, 1.0}.validate());
    CHECK_THROWS_AS((GridSpec{3, 64, 1.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((GridSpec{1, 48, 1.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((GridSpec{1, 64, 0.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((GridSpec{2, 8192, 1.0}.validate()), InvalidArgument);
    const GridSpec g{2, 8, 4.0};
    CHECK(g.node(9)[0] == 0.5);
    CHECK(g.node(9)[1] == 0.5);
    CHECK(g.wrap({-0.5, 4.5})[0] == 3.5);
    CHECK(g.wrap({-0.5, 4.5})[1] == 0.5);
}

TEST_CASE("kernel has unit mass") {
    for (const GridSpec g : {GridSpec{1, 128, 10.0}, GridSpec{2, 64, 5.0}, GridSpec{1, 16, 1.0}}) {
        const auto k = Kernel::with_width_cells(g, 4.0);
        CHECK(std::abs(k.quadrature_mass() - 1.0) < 1e-10);
        double s = 0.0;
        for (double v : k.samples()) {
            CHECK(v >= 0.0);
            s += v;
        }
        CHECK(std::abs(s * g.cell_volume() - 1.0) < 1e-10);
        if (k.cutoff() < Kernel::kCutoffWidths * k.width()) continue;   // truncated on tiny grids
        // continuum integral of one axis factor on a 16x finer quadrature
        const double hf = g.h() / 16;
        double c = 0.0;
        for (int j = -16 * g.n / 2; j < 16 * g.n / 2; ++j) c += k.factor(j * hf) * hf;
        CHECK(std::abs(std::pow(c, g.dim) - 1.0) < 1e-10);
    }
}

TEST_CASE("deposit of a single atom is the kernel itself") {
    const GridSpec g{1, 128, 10.0};
    const auto k = Kernel::with_width_cells(g, 4.0);
    const double n0 = 37.0;
    const auto f = deposit(EmpiricalMeasure(1, {Atom{{0.0}, 1.0 / n0}}), k);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double expect = k.value({min_image(g.node(i)[0], g.L)}) / n0;
        CHECK(f.values[i] == doctest::Approx(expect).epsilon(1e-14));
    }

    const GridSpec g2{2, 32, 3.0};
    const auto k2 = Kernel::with_width_cells(g2, 2.0);
    const Point x0{2.9, 0.05};
    const auto f2 = deposit(EmpiricalMeasure(2, {Atom{x0, 1.0}}), k2);
    double worst = 0.0;
    for (std::size_t i = 0; i < g2.size(); ++i) {
        const Point x = g2.node(i);
        const double expect = k2.value({min_image(x[0] - x0[0], g2.L), min_image(x[1] - x0[1], g2.L)});
        worst = std::max(worst, std::abs(f2.values[i] - expect));
    }
    CHECK(worst < 1e-13);
}

TEST_CASE("deposit is linear in weights") {
    const GridSpec g{1, 64, 4.0};
    const auto k = Kernel::with_width_cells(g, 3.0);
    const double w = 0.3;
    const auto one = deposit(EmpiricalMeasure(1, {Atom{{1.7}, w}}), k);
    const auto two = deposit(EmpiricalMeasure(1, {Atom{{1.7}, w}, Atom{{1.7}, w}}), k);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(two.values[i] == doctest::Approx(2.0 * one.values[i]).epsilon(1e-15));
}

TEST_CASE("deposit integral equals measure mass") {
    for (int dim : {1, 2}) {
        const GridSpec g{dim, dim == 1 ? 256 : 64, 6.0};
        const auto k = Kernel::with_width_cells(g, 4.0);
        const auto m = random_measure(dim, g.L, 500, 3);
        const auto f = deposit(m, k);
        const double integral = f.integral();
        CHECK(std::abs(integral - m.total_mass()) < 1e-8 * m.total_mass());
    }
}

TEST_CASE("deposit serial and parallel kernels agree and ignore thread count") {
    for (int dim : {1, 2}) {
        const GridSpec g{dim, 64, 5.0};
        const auto k = Kernel::with_width_cells(g, 4.0);
        const auto m = random_measure(dim, g.L, 20000, 9);
        const auto ref = kernels::deposit_serial(m, k, 0.0);
        const int saved = omp_get_max_threads();
        omp_set_num_threads(1);
        const auto a = kernels::deposit_omp(m, k, 0.0);
        omp_set_num_threads(4);
        const auto b = kernels::deposit_omp(m, k, 0.0);
        omp_set_num_threads(saved);
        CHECK(a.values == b.values);
        double worst = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            worst = std::max(worst, std::abs(a.values[i] - ref.values[i]));
        CHECK(worst < 1e-12 * ref.sup_norm());
    }
}

TEST_CASE("deposit rejects non-finite atoms") {
    const GridSpec g{1, 16, 1.0};
    const auto k = Kernel::with_width_cells(g, 2.0);
    CHECK_THROWS_AS(deposit(EmpiricalMeasure(1, {Atom{{NAN}, 1.0}}), k), NonFiniteAtom);
    CHECK_THROWS_AS(deposit(EmpiricalMeasure(1, {Atom{{0.2}, INFINITY}}), k), NonFiniteAtom);
}

TEST_CASE("semigroup: constant field decays by exp(-r dt)") {
    const GridSpec g{2, 16, 2.0};
    Field rho(g);
    for (auto& v : rho.values) v = 0.75;
    const auto out = free_step(rho, 0.1, 1.3, 0.7);
    for (double v : out.values) CHECK(v == doctest::Approx(0.75 * std::exp(-0.07)).epsilon(1e-15));
    CHECK(out.time == doctest::Approx(0.1));
}

TEST_CASE("semigroup: Fourier modes are eigenfunctions") {
    const double D = 0.8, r = 0.5, dt = 0.05;
    for (int dim : {1, 2}) {
        const GridSpec g{dim, 32, 3.0};
        auto rho = cosine_mode(g, 2, dim == 2 ? 1 : 0, 1.5);
        const double k2 = std::pow(2 * kPi / g.L, 2) * (4 + (dim == 2 ? 1 : 0));
        const double factor = std::exp(-(D * k2 + r) * dt);
        Field zero(g);
        const auto out = semigroup_step(rho, zero, dt, D, r, 2.0);
        for (std::size_t i = 0; i < g.size(); ++i)
            CHECK(std::abs(out.values[i] - factor * rho.values[i]) < 1e-14);
    }
}

TEST_CASE("semigroup: constant source reaches alpha s / r") {
    const GridSpec g{1, 32, 1.0};
    const double alpha = 2.0, s = 0.3, r = 1.5, D = 1.0, dt = 0.1;
    Field src(g), rho(g);
    for (auto& v : src.values) v = s;
    for (int k = 0; k < 300; ++k) rho = semigroup_step(rho, src, dt, D, r, alpha);   // t = 30
    for (double v : rho.values) CHECK(std::abs(v - alpha * s / r) < 1e-6 * alpha * s / r);
}

TEST_CASE("semigroup: two half steps equal one full step") {
    const GridSpec g{2, 32, 4.0};
    std::mt19937_64 gen(5);
    std::normal_distribution<double> nd;
    Field rho(g), src(g);
    for (auto& v : rho.values) v = nd(gen);
    for (auto& v : src.values) v = std::abs(nd(gen));
    const double dt = 0.2, D = 0.5, r = 0.9, alpha = 1.7;
    const auto full = semigroup_step(rho, src, dt, D, r, alpha);
    const auto half = semigroup_step(semigroup_step(rho, src, dt / 2, D, r, alpha), src, dt / 2, D,
                                     r, alpha);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        worst = std::max(worst, std::abs(full.values[i] - half.values[i]));
    CHECK(worst < 1e-13 * full.sup_norm());
}

TEST_CASE("semigroup: zero mode mass balance") {
    const GridSpec g{1, 64, 5.0};
    std::mt19937_64 gen(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Field rho(g), src(g);
    for (auto& v : rho.values) v = u(gen);
    const double dt = 0.05, D = 1.0, r = 0.8, alpha = 2.5;
    for (int k = 0; k < 20; ++k) {
        for (auto& v : src.values) v = u(gen);
        const auto next = semigroup_step(rho, src, dt, D, r, alpha);
        const double expect =
            std::exp(-r * dt) * rho.mean() + alpha * (1 - std::exp(-r * dt)) / r * src.mean();
        CHECK(next.mean() == doctest::Approx(expect).epsilon(1e-13));
        rho = next;
    }
}

TEST_CASE("semigroup: alpha zero is free evolution") {
    const GridSpec g{1, 32, 1.0};
    Field rho = cosine_mode(g, 3, 0, 1.0), src(g);
    for (auto& v : src.values) v = 5.0;
    CHECK(semigroup_step(rho, src, 0.01, 1.0, 1.0, 0.0).values == free_step(rho, 0.01, 1.0, 1.0).values);
}

TEST_CASE("semigroup rejects mismatched grids") {
    CHECK_THROWS_AS(semigroup_step(Field(GridSpec{1, 32, 1.0}), Field(GridSpec{1, 64, 1.0}), 0.1,
                                   1.0, 1.0, 1.0),
                    GridMismatch);
    CHECK_THROWS_AS(semigroup_step(Field(GridSpec{1, 32, 1.0}), Field(GridSpec{1, 32, 2.0}), 0.1,
                                   1.0, 1.0, 1.0),
                    GridMismatch);
}

TEST_CASE("interpolant matches analytic Fourier mode gradient") {
    std::mt19937_64 gen(12);
    for (int dim : {1, 2}) {
        const GridSpec g{dim, 64, 7.0};
        const int m0 = 3, m1 = dim == 2 ? -2 : 0;
        const auto f = cosine_mode(g, m0, m1, 1.25);
        const FieldInterpolant I(f);
        std::uniform_real_distribution<double> u(-g.L, 2 * g.L);
        const double w = 2 * kPi / g.L;
        for (int t = 0; t < 500; ++t) {
            const Point x{u(gen), dim == 2 ? u(gen) : 0.0};
            const double phase = w * (m0 * x[0] + m1 * x[1]);
            double v;
            Point grad;
            I.eval_both(x, v, grad);
            CHECK(std::abs(v - 1.25 * std::cos(phase)) < 1e-8);
            CHECK(std::abs(grad[0] + 1.25 * w * m0 * std::sin(phase)) < 1e-8);
            if (dim == 2) CHECK(std::abs(grad[1] + 1.25 * w * m1 * std::sin(phase)) < 1e-8);
        }
    }
}

TEST_CASE("interpolant of a constant has zero gradient") {
    for (int dim : {1, 2}) {
        const GridSpec g{dim, 32, 2.5};
        Field f(g);
        for (auto& v : f.values) v = -0.4;
        const FieldInterpolant I(f);
        std::mt19937_64 gen(2);
        std::uniform_real_distribution<double> u(0, g.L);
        for (int t = 0; t < 100; ++t) {
            const auto grad = I.eval_grad({u(gen), u(gen)});
            CHECK(grad[0] == 0.0);
            CHECK(grad[1] == 0.0);
        }
    }
}

TEST_CASE("interpolant reproduces node values") {
    std::mt19937_64 gen(4);
    std::normal_distribution<double> nd;
    for (int dim : {1, 2}) {
        const GridSpec g{dim, 16, 3.0};
        Field f(g);
        for (auto& v : f.values) v = nd(gen);
        const FieldInterpolant I(f);
        for (std::size_t i = 0; i < g.size(); ++i) {
            CHECK(I.eval(g.node(i)) == f.values[i]);
            Point shifted = g.node(i);
            shifted[0] += g.L;   // periodic copy
            CHECK(I.eval(shifted) == f.values[i]);
        }
        CHECK_THROWS_AS(I.eval({NAN, 0.0}), NonFiniteQuery);
    }
}

TEST_CASE("spectral node gradient of a Fourier mode") {
    const GridSpec g{2, 32, 2.0};
    const auto f = cosine_mode(g, 1, 2, 1.0);
    const auto grad = grid_gradient(f);
    const double w = 2 * kPi / g.L;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Point x = g.node(i);
        const double s = std::sin(w * (x[0] + 2 * x[1]));
        CHECK(std::abs(grad[0][i] + w * s) < 1e-12);
        CHECK(std::abs(grad[1][i] + 2 * w * s) < 1e-12);
    }
    const auto diff = field_difference(f, cosine_mode(g, 1, 2, 0.5));
    CHECK(diff.value_sup == doctest::Approx(0.5));
    CHECK(diff.grad_sup == doctest::Approx(0.5 * w * std::sqrt(5.0)).epsilon(1e-3));
}

TEST_CASE("field files round trip") {
    const GridSpec g{2, 8, 1.5};
    Field f(g, 0.25);
    std::mt19937_64 gen(1);
    std::normal_distribution<double> nd;
    for (auto& v : f.values) v = nd(gen);
    std::stringstream ss;
    write_field_binary(ss, f);
    CHECK(ss.str().size() == 4 + 4 + 8 + 8 + 64 * 8);
    const auto back = read_field_binary(ss);
    CHECK(back.grid == g);
    CHECK(back.time == 0.25);
    CHECK(back.values == f.values);

    std::stringstream cut(std::string(30, '\0'));
    CHECK_THROWS_AS(read_field_binary(cut), ParseError);

    std::stringstream csv;
    write_field_csv(csv, f);
    std::string header;
    std::getline(csv, header);
    CHECK(header == "x,y,value");
    std::size_t rows = 0;
    for (std::string line; std::getline(csv, line);) ++rows;
    CHECK(rows == g.size());
}
