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

#include "pksim/spectral.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "pksim/errors.hpp"

namespace pksim {

namespace {

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
};

// The FFTW planner is not reentrant; plans are built once under this lock
// and then only executed through the new-array interface.
PlanPair plans_for(const GridSpec& g) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, PlanPair> cache;
    std::lock_guard lock(mutex);
    auto [it, inserted] = cache.try_emplace({g.dim, g.n});
    if (inserted) {
        const std::size_t half = std::size_t(g.n / 2 + 1);
        const std::size_t spec = g.dim == 1 ? half : std::size_t(g.n) * half;
        RealBuffer real(g.size());
        Spectrum cplx(spec);
        auto* in = real.data();
        auto* out = reinterpret_cast<fftw_complex*>(cplx.data());
        if (g.dim == 1) {
            it->second.forward = fftw_plan_dft_r2c_1d(g.n, in, out, FFTW_ESTIMATE);
            it->second.inverse = fftw_plan_dft_c2r_1d(g.n, out, in, FFTW_ESTIMATE);
        } else {
            it->second.forward = fftw_plan_dft_r2c_2d(g.n, g.n, in, out, FFTW_ESTIMATE);
            it->second.inverse = fftw_plan_dft_c2r_2d(g.n, g.n, out, in, FFTW_ESTIMATE);
        }
    }
    return it->second;
}

} // namespace

SpectralGrid::SpectralGrid(const GridSpec& grid) : grid_(grid) {
    grid_.validate();
    spectrum_size_ = grid_.dim == 1 ? std::size_t(half()) : std::size_t(grid_.n) * std::size_t(half());
    const auto p = plans_for(grid_);
    forward_plan_ = p.forward;
    inverse_plan_ = p.inverse;
}

Spectrum SpectralGrid::forward(const std::vector<double>& values) const {
    if (values.size() != grid_.size()) throw GridMismatch("transform input size");
    RealBuffer in(values.begin(), values.end());
    Spectrum out(spectrum_size_);
    fftw_execute_dft_r2c(forward_plan_, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

std::vector<double> SpectralGrid::inverse(const Spectrum& spec) const {
    if (spec.size() != spectrum_size_) throw GridMismatch("spectrum size");
    Spectrum work(spec);   // c2r overwrites its input
    RealBuffer out(grid_.size());
    fftw_execute_dft_c2r(inverse_plan_, reinterpret_cast<fftw_complex*>(work.data()), out.data());
    const double scale = 1.0 / double(grid_.size());
    std::vector<double> values(grid_.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = out[i] * scale;
    return values;
}

std::array<int, kMaxDim> SpectralGrid::frequency(std::size_t flat) const {
    const int n = grid_.n;
    std::array<int, kMaxDim> f{};
    if (grid_.dim == 1) {
        f[0] = int(flat);
    } else {
        const int i = int(flat / std::size_t(half()));
        f[0] = i <= n / 2 ? i : i - n;
        f[1] = int(flat % std::size_t(half()));
    }
    return f;
}

Point SpectralGrid::wavenumber(std::size_t flat) const {
    const auto f = frequency(flat);
    const double w = 2.0 * std::numbers::pi / grid_.L;
    Point k{};
    for (int a = 0; a < grid_.dim; ++a) k[a] = w * f[a];
    return k;
}

double SpectralGrid::wavenumber_sq(std::size_t flat) const {
    const auto k = wavenumber(flat);
    return k[0] * k[0] + k[1] * k[1];
}

bool SpectralGrid::is_nyquist(std::size_t flat, int axis) const {
    const auto f = frequency(flat);
    return std::abs(f[axis]) == grid_.n / 2;
}

std::vector<double> SpectralGrid::derivative(const std::vector<double>& values, int axis) const {
    Spectrum s = forward(values);
    for (std::size_t m = 0; m < s.size(); ++m) {
        if (is_nyquist(m, axis)) {
            s[m] = 0.0;
            continue;
        }
        s[m] *= std::complex<double>(0.0, wavenumber(m)[axis]);
    }
    return inverse(s);
}

std::vector<double> SpectralGrid::derivative_shifted(const Spectrum& spec, int axis,
                                                     int shift_axis) const {
    Spectrum s(spec);
    const double hh = 0.5 * grid_.h();
    for (std::size_t m = 0; m < s.size(); ++m) {
        if (is_nyquist(m, axis) || is_nyquist(m, shift_axis)) {
            s[m] = 0.0;
            continue;
        }
        const Point k = wavenumber(m);
        s[m] *= std::complex<double>(0.0, k[axis]) * std::polar(1.0, k[shift_axis] * hh);
    }
    return inverse(s);
}

std::vector<double> SpectralGrid::shifted(const Spectrum& spec, int shift_axis) const {
    Spectrum s(spec);
    const double hh = 0.5 * grid_.h();
    for (std::size_t m = 0; m < s.size(); ++m) {
        if (is_nyquist(m, shift_axis)) {
            s[m] = 0.0;
            continue;
        }
        s[m] *= std::polar(1.0, wavenumber(m)[shift_axis] * hh);
    }
    return inverse(s);
}

} // namespace pksim
