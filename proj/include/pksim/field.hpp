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
#include <iosfwd>
#include <string>
#include <vector>

#include "pksim/grid.hpp"
#include "pksim/population.hpp"
#include "pksim/spectral.hpp"

namespace pksim {

// Mollifier: Gaussian of width `width` per axis, truncated at a cutoff where
// it is below 1e-14 of its peak, evaluated by minimum image and normalised so
// that the grid quadrature of its samples is exactly one. In the chemotaxis
// literature the same object is sometimes written K.
class Kernel {
public:
    static constexpr double kCutoffWidths = 8.0;

    Kernel(const GridSpec& grid, double width);
    static Kernel with_width_cells(const GridSpec& grid, double cells) {
        return Kernel(grid, cells * grid.h());
    }

    const GridSpec& grid() const { return grid_; }
    double width() const { return width_; }
    double cutoff() const { return cutoff_; }
    // Nodes examined on each side of an atom by deposit.
    int stencil_half() const { return stencil_half_; }

    // One-axis factor at signed offset delta (no wrapping).
    double factor(double delta) const;
    // kappa at a minimum-image offset.
    double value(const Point& offset) const;
    // sup |grad kappa|, from the analytic Gaussian profile.
    double grad_sup() const;

    const std::vector<double>& samples() const { return samples_; }
    // Transform of h^d * samples: multiplying by it performs periodic
    // convolution with kappa.
    const Spectrum& spectrum() const { return spectrum_; }
    double quadrature_mass() const;

private:
    GridSpec grid_;
    double width_;
    double cutoff_;
    int stencil_half_;
    double norm1_;
    std::vector<double> samples_;
    Spectrum spectrum_;
};

// Exact trigonometric interpolant of a grid field. eval_grad is the exact
// gradient of the same interpolant, so the pair is consistent; the Nyquist
// mode is represented by a cosine so the interpolant is real.
class FieldInterpolant {
public:
    explicit FieldInterpolant(const Field& f);

    const GridSpec& grid() const { return grid_; }
    // Throws NonFiniteQuery on non-finite input. x is wrapped internally.
    double eval(const Point& x) const;
    Point eval_grad(const Point& x) const;
    void eval_both(const Point& x, double& value, Point& grad) const;

private:
    std::ptrdiff_t node_index(const Point& x) const;

    GridSpec grid_;
    int half_;
    std::vector<std::complex<double>> coeff_;
    std::vector<double> nodes_;   // eval on a node returns the sample itself
};

// Node values sum_atoms w * kappa(node - atom), atoms wrapped onto the torus.
// Atoms are summed in the order given. Throws NonFiniteAtom.
Field deposit(const EmpiricalMeasure& measure, const Kernel& kernel, double time = 0.0);

// Periodic convolution of a grid density with kappa, via the kernel spectrum.
Field convolve(const Field& density, const Kernel& kernel);

// One step of the mild solution with the source frozen over the step:
//   rho(t+dt) = S_dt rho(t) + alpha int_0^dt S_{dt-s} source ds,
// S_t = exp(t (D Laplacian - r)), applied exactly in Fourier space.
Field semigroup_step(const Field& rho, const Field& source, double dt, double D, double r,
                     double alpha);
Field free_step(const Field& rho, double dt, double D, double r);

// Spectral gradient on the grid nodes, one array per axis.
std::array<std::vector<double>, kMaxDim> grid_gradient(const Field& f);

// sup over nodes of |a - b| and of the Euclidean gradient difference.
struct FieldDifference {
    double value_sup = 0.0;
    double grad_sup = 0.0;
};
FieldDifference field_difference(const Field& a, const Field& b);

// CSV: header `x,value` (1D) or `x,y,value` (2D), one node per row.
void write_field_csv(std::ostream& os, const Field& f);
// Binary: uint32 d, uint32 n, f64 L, f64 t, then n^d f64 values row-major;
// all little-endian.
void write_field_binary(std::ostream& os, const Field& f);
Field read_field_binary(std::istream& is);

} // namespace pksim
