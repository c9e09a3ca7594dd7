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

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include <fftw3.h>

#include "pksim/grid.hpp"

namespace pksim {

template <class T>
struct FftwAllocator {
    using value_type = T;
    FftwAllocator() = default;
    template <class U>
    FftwAllocator(const FftwAllocator<U>&) noexcept {}
    T* allocate(std::size_t n) {
        void* p = fftw_malloc(n * sizeof(T));
        if (!p) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) noexcept { fftw_free(p); }
    template <class U>
    bool operator==(const FftwAllocator<U>&) const noexcept { return true; }
};

using RealBuffer = std::vector<double, FftwAllocator<double>>;
using Spectrum = std::vector<std::complex<double>, FftwAllocator<std::complex<double>>>;

// Real-to-half-complex transforms on a periodic grid. In 1D the spectrum has
// n/2+1 entries; in 2D it is n x (n/2+1), row-major. Plans are created once
// per (dim, n) under a lock and shared; execution is reentrant.
class SpectralGrid {
public:
    explicit SpectralGrid(const GridSpec& grid);

    const GridSpec& grid() const { return grid_; }
    std::size_t spectrum_size() const { return spectrum_size_; }
    int half() const { return grid_.n / 2 + 1; }

    // Unnormalised forward transform.
    Spectrum forward(const std::vector<double>& values) const;
    // Inverse including the 1/n^d normalisation.
    std::vector<double> inverse(const Spectrum& spec) const;

    // Signed integer frequency of spectrum entry `flat` along each axis.
    std::array<int, kMaxDim> frequency(std::size_t flat) const;
    // Angular wavenumber vector 2 pi f / L.
    Point wavenumber(std::size_t flat) const;
    double wavenumber_sq(std::size_t flat) const;
    // True when the axis frequency is the Nyquist frequency n/2.
    bool is_nyquist(std::size_t flat, int axis) const;

    // Spectral derivative along `axis` of grid values, Nyquist zeroed.
    std::vector<double> derivative(const std::vector<double>& values, int axis) const;
    // Same, sampled on the grid shifted by +h/2 along `shift_axis`.
    std::vector<double> derivative_shifted(const Spectrum& spec, int axis, int shift_axis) const;
    std::vector<double> shifted(const Spectrum& spec, int shift_axis) const;

private:
    GridSpec grid_;
    std::size_t spectrum_size_;
    fftw_plan forward_plan_;
    fftw_plan inverse_plan_;
};

} // namespace pksim
