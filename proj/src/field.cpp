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

#include "pksim/field.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numbers>
#include <ostream>

#include "pksim/errors.hpp"
#include "pksim/kernels.hpp"
#include "pksim/textio.hpp"

namespace pksim {

namespace {

double min_image(double d, double L) {
    d -= L * std::round(d / L);
    return d;
}

} // namespace

Kernel::Kernel(const GridSpec& grid, double width) : grid_(grid), width_(width) {
    grid_.validate();
    if (!(width > 0.0) || !std::isfinite(width)) throw InvalidArgument("kernel width must be positive");
    const double h = grid_.h();
    cutoff_ = std::min(kCutoffWidths * width_, (grid_.n / 2 - 1) * h);
    stencil_half_ = int(std::ceil(cutoff_ / h));

    norm1_ = 1.0;
    double s = 0.0;
    for (int j = 0; j < grid_.n; ++j) s += factor(min_image(j * h, grid_.L));
    norm1_ = 1.0 / (h * s);

    samples_.resize(grid_.size());
    for (std::size_t m = 0; m < samples_.size(); ++m) {
        const Point x = grid_.node(m);
        Point off{};
        for (int a = 0; a < grid_.dim; ++a) off[a] = min_image(x[a], grid_.L);
        samples_[m] = value(off);
    }
    SpectralGrid sg(grid_);
    std::vector<double> scaled(samples_);
    const double vol = grid_.cell_volume();
    for (double& v : scaled) v *= vol;
    spectrum_ = sg.forward(scaled);
}

double Kernel::factor(double delta) const {
    if (std::abs(delta) > cutoff_) return 0.0;
    const double u = delta / width_;
    return norm1_ * std::exp(-0.5 * u * u);
}

double Kernel::value(const Point& offset) const {
    double v = 1.0;
    for (int a = 0; a < grid_.dim; ++a) v *= factor(offset[a]);
    return v;
}

double Kernel::grad_sup() const {
    // Radial Gaussian: |grad| peaks at r = width.
    return std::pow(norm1_, grid_.dim) / width_ * std::exp(-0.5);
}

double Kernel::quadrature_mass() const {
    double s = 0.0;
    for (double v : samples_) s += v;
    return s * grid_.cell_volume();
}

FieldInterpolant::FieldInterpolant(const Field& f) : grid_(f.grid), half_(f.grid.n / 2 + 1) {
    SpectralGrid sg(grid_);
    const Spectrum s = sg.forward(f.values);
    const double scale = 1.0 / double(grid_.size());
    coeff_.resize(s.size());
    for (std::size_t m = 0; m < s.size(); ++m) coeff_[m] = s[m] * scale;
    nodes_ = f.values;
}

// Flat index of x when every coordinate sits exactly on a node, else -1.
std::ptrdiff_t FieldInterpolant::node_index(const Point& x) const {
    const double h = grid_.h();
    std::ptrdiff_t flat = 0;
    for (int a = 0; a < grid_.dim; ++a) {
        const double k = std::nearbyint(x[a] / h);
        if (k * h != x[a]) return -1;
        const auto i = std::ptrdiff_t(k) % grid_.n;
        flat = flat * grid_.n + i;
    }
    return flat;
}

namespace {

// e^{i w m x} for m = 0..n/2 by repeated multiplication.
void powers(double x, double w, int count, std::complex<double>* out) {
    const std::complex<double> z = std::polar(1.0, w * x);
    out[0] = 1.0;
    for (int m = 1; m < count; ++m) out[m] = out[m - 1] * z;
    // Re-anchor the tail to limit drift of the recurrence.
    if (count > 1) out[count - 1] = std::polar(1.0, w * x * (count - 1));
}

} // namespace

void FieldInterpolant::eval_both(const Point& xin, double& value, Point& grad) const {
    for (int a = 0; a < grid_.dim; ++a)
        if (!std::isfinite(xin[a])) throw NonFiniteQuery("interpolant query");
    const Point x = grid_.wrap(xin);
    const int n = grid_.n;
    const int ny = n / 2;
    const double w = 2.0 * std::numbers::pi / grid_.L;
    grad = Point{};

    std::complex<double> p1[4096 / 2 + 1];
    std::vector<std::complex<double>> heap;
    std::complex<double>* P = p1;
    if (half_ > int(std::size(p1))) {
        heap.resize(std::size_t(half_));
        P = heap.data();
    }
    powers(x[grid_.dim - 1], w, half_, P);

    if (grid_.dim == 1) {
        double v = coeff_[0].real();
        double g = 0.0;
        for (int m = 1; m < ny; ++m) {
            const std::complex<double> t = coeff_[m] * P[m];
            v += 2.0 * t.real();
            g += -2.0 * m * w * t.imag();
        }
        v += coeff_[ny].real() * P[ny].real();
        g += -coeff_[ny].real() * ny * w * P[ny].imag();
        const auto node = node_index(x);
        value = node >= 0 ? nodes_[std::size_t(node)] : v;
        grad[0] = g;
        return;
    }

    // 2D: inner sums over the half axis, then the full axis.
    std::vector<std::complex<double>> A(static_cast<std::size_t>(half_));
    powers(x[0], w, half_, A.data());
    double v = 0.0, g0 = 0.0, g1 = 0.0;
    for (int i = 0; i < n; ++i) {
        const int f0 = i <= ny ? i : i - n;
        const std::complex<double>* row = &coeff_[std::size_t(i) * std::size_t(half_)];
        std::complex<double> s{0.0, 0.0}, ds{0.0, 0.0};
        for (int j = 0; j < half_; ++j) {
            if (j == 0) {
                s += row[0];
            } else if (j == ny) {
                s += row[j] * P[j].real();
                ds += row[j] * (-ny * w * P[j].imag());
            } else {
                const std::complex<double> t = row[j] * P[j];
                s += 2.0 * t;
                ds += 2.0 * t * std::complex<double>(0.0, j * w);
            }
        }
        std::complex<double> a, da;
        if (std::abs(f0) == ny) {
            a = A[ny].real();
            da = -ny * w * A[ny].imag();
        } else if (f0 >= 0) {
            a = A[f0];
            da = a * std::complex<double>(0.0, f0 * w);
        } else {
            a = std::conj(A[-f0]);
            da = a * std::complex<double>(0.0, f0 * w);
        }
        v += (a * s).real();
        g0 += (da * s).real();
        g1 += (a * ds).real();
    }
    const auto node = node_index(x);
    value = node >= 0 ? nodes_[std::size_t(node)] : v;
    grad[0] = g0;
    grad[1] = g1;
}

double FieldInterpolant::eval(const Point& x) const {
    double v;
    Point g;
    eval_both(x, v, g);
    return v;
}

Point FieldInterpolant::eval_grad(const Point& x) const {
    double v;
    Point g;
    eval_both(x, v, g);
    return g;
}

Field deposit(const EmpiricalMeasure& measure, const Kernel& kernel, double time) {
    return kernels::deposit_omp(measure, kernel, time);
}

Field convolve(const Field& density, const Kernel& kernel) {
    require_same_grid(density.grid, kernel.grid(), "convolve");
    SpectralGrid sg(density.grid);
    Spectrum s = sg.forward(density.values);
    const Spectrum& k = kernel.spectrum();
    for (std::size_t m = 0; m < s.size(); ++m) s[m] *= k[m];
    return Field(density.grid, sg.inverse(s), density.time);
}

Field semigroup_step(const Field& rho, const Field& source, double dt, double D, double r,
                     double alpha) {
    require_same_grid(rho.grid, source.grid, "semigroup_step");
    SpectralGrid sg(rho.grid);
    Spectrum s = sg.forward(rho.values);
    if (alpha == 0.0) {
        for (std::size_t m = 0; m < s.size(); ++m)
            s[m] *= std::exp(-(D * sg.wavenumber_sq(m) + r) * dt);
    } else {
        const Spectrum src = sg.forward(source.values);
        for (std::size_t m = 0; m < s.size(); ++m) {
            const double a = D * sg.wavenumber_sq(m) + r;
            const double e = std::exp(-a * dt);
            const double phi = a == 0.0 ? dt : -std::expm1(-a * dt) / a;
            s[m] = e * s[m] + (alpha * phi) * src[m];
        }
    }
    return Field(rho.grid, sg.inverse(s), rho.time + dt);
}

Field free_step(const Field& rho, double dt, double D, double r) {
    return semigroup_step(rho, rho, dt, D, r, 0.0);
}

std::array<std::vector<double>, kMaxDim> grid_gradient(const Field& f) {
    SpectralGrid sg(f.grid);
    std::array<std::vector<double>, kMaxDim> g;
    for (int a = 0; a < f.grid.dim; ++a) g[a] = sg.derivative(f.values, a);
    return g;
}

FieldDifference field_difference(const Field& a, const Field& b) {
    require_same_grid(a.grid, b.grid, "field_difference");
    Field d(a.grid, a.values, a.time);
    for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] -= b.values[i];
    FieldDifference out;
    out.value_sup = d.sup_norm();
    const auto g = grid_gradient(d);
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        double s = 0.0;
        for (int ax = 0; ax < a.grid.dim; ++ax) s += g[ax][i] * g[ax][i];
        out.grad_sup = std::max(out.grad_sup, std::sqrt(s));
    }
    return out;
}

void write_field_csv(std::ostream& os, const Field& f) {
    os << (f.grid.dim == 1 ? "x,value\n" : "x,y,value\n");
    for (std::size_t m = 0; m < f.values.size(); ++m) {
        const Point x = f.grid.node(m);
        for (int a = 0; a < f.grid.dim; ++a) os << format_double(x[a]) << ',';
        os << format_double(f.values[m]) << '\n';
    }
}

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = char((v >> (8 * i)) & 0xffu);
    os.write(b, 4);
}
void put_f64(std::ostream& os, double d) {
    const auto v = std::bit_cast<std::uint64_t>(d);
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = char((v >> (8 * i)) & 0xffu);
    os.write(b, 8);
}
std::uint64_t get_le(std::istream& is, int bytes) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), bytes)) throw ParseError("truncated field file");
    std::uint64_t v = 0;
    for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

} // namespace

void write_field_binary(std::ostream& os, const Field& f) {
    put_u32(os, std::uint32_t(f.grid.dim));
    put_u32(os, std::uint32_t(f.grid.n));
    put_f64(os, f.grid.L);
    put_f64(os, f.time);
    for (double v : f.values) put_f64(os, v);
}

Field read_field_binary(std::istream& is) {
    GridSpec g;
    g.dim = int(get_le(is, 4));
    g.n = int(get_le(is, 4));
    g.L = std::bit_cast<double>(get_le(is, 8));
    const double t = std::bit_cast<double>(get_le(is, 8));
    try {
        g.validate();
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what());
    }
    std::vector<double> v(g.size());
    for (double& x : v) x = std::bit_cast<double>(get_le(is, 8));
    return Field(g, std::move(v), t);
}

} // namespace pksim
