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

#include "pksim/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "pksim/errors.hpp"

namespace pksim::kernels {

namespace {

// Adds w * kappa(node - x) to every node within the cutoff of x.
void deposit_atom(const Kernel& k, const Atom& atom, double* out) {
    const GridSpec& g = k.grid();
    const int n = g.n;
    const double h = g.h();
    const int S = k.stencil_half();
    const int width = 2 * S + 2;
    double wts[2][2 * 2048 + 2];
    int idx[2][2 * 2048 + 2];
    for (int a = 0; a < g.dim; ++a) {
        const double x = atom.position[a] - g.L * std::floor(atom.position[a] / g.L);
        if (!std::isfinite(x)) throw NonFiniteAtom("deposit");
        const long base = long(std::floor(x / h));
        for (int m = 0; m < width; ++m) {
            const long j = base - S + m;
            wts[a][m] = k.factor(double(j) * h - x);
            idx[a][m] = int(((j % n) + n) % n);
        }
    }
    if (g.dim == 1) {
        for (int m = 0; m < width; ++m)
            if (wts[0][m] != 0.0) out[idx[0][m]] += atom.weight * wts[0][m];
        return;
    }
    for (int m0 = 0; m0 < width; ++m0) {
        if (wts[0][m0] == 0.0) continue;
        const double w0 = atom.weight * wts[0][m0];
        double* row = out + std::size_t(idx[0][m0]) * std::size_t(n);
        for (int m1 = 0; m1 < width; ++m1)
            if (wts[1][m1] != 0.0) row[idx[1][m1]] += w0 * wts[1][m1];
    }
}

void check_measure(const EmpiricalMeasure& m, const Kernel& k) {
    if (m.dim() != k.grid().dim) throw DimensionMismatch("measure and grid");
    for (const auto& a : m.atoms())
        if (!std::isfinite(a.weight)) throw NonFiniteAtom("atom weight");
}

} // namespace

Field deposit_serial(const EmpiricalMeasure& measure, const Kernel& kernel, double time) {
    check_measure(measure, kernel);
    Field f(kernel.grid(), time);
    for (const auto& a : measure.atoms()) deposit_atom(kernel, a, f.values.data());
    return f;
}

std::size_t deposit_chunk_size(std::size_t atoms) {
    return std::max<std::size_t>(128, (atoms + 255) / 256);
}

Field deposit_omp(const EmpiricalMeasure& measure, const Kernel& kernel, double time) {
    check_measure(measure, kernel);
    const auto& atoms = measure.atoms();
    const std::size_t chunk = deposit_chunk_size(atoms.size());
    const std::size_t nchunks = std::max<std::size_t>(1, (atoms.size() + chunk - 1) / chunk);
    if (nchunks == 1) return deposit_serial(measure, kernel, time);

    const std::size_t cells = kernel.grid().size();
    std::vector<std::vector<double>> buf(nchunks);
    bool bad = false;
#pragma omp parallel for schedule(dynamic, 1) reduction(|| : bad)
    for (std::ptrdiff_t c = 0; c < std::ptrdiff_t(nchunks); ++c) {
        buf[c].assign(cells, 0.0);
        const std::size_t lo = std::size_t(c) * chunk;
        const std::size_t hi = std::min(atoms.size(), lo + chunk);
        try {
            for (std::size_t i = lo; i < hi; ++i) deposit_atom(kernel, atoms[i], buf[c].data());
        } catch (const NonFiniteAtom&) {
            bad = true;
        }
    }
    if (bad) throw NonFiniteAtom("deposit");
    for (std::size_t stride = 1; stride < nchunks; stride *= 2) {
        const std::ptrdiff_t pairs = std::ptrdiff_t((nchunks + 2 * stride - 1) / (2 * stride));
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t p = 0; p < pairs; ++p) {
            const std::size_t i = std::size_t(p) * 2 * stride;
            if (i + stride < nchunks) {
                auto& a = buf[i];
                const auto& b = buf[i + stride];
                for (std::size_t m = 0; m < cells; ++m) a[m] += b[m];
            }
        }
    }
    return Field(kernel.grid(), std::move(buf[0]), time);
}

namespace {

Point move_one(const LineageIndex& id, const Point& x, const MoveContext& c) {
    const int d = c.noise->dim();
    Point out = x;
    if (c.drift && !c.drift->is_zero()) {
        const GridSpec& g = c.rho->grid();
        const Point xw = g.wrap(x);
        double v;
        Point grad;
        c.rho->eval_both(xw, v, grad);
        const Point b = (*c.drift)(xw, grad, d);
        for (int a = 0; a < d; ++a) out[a] += b[a] * c.dt;
    }
    const Point dw = c.noise->wiener_increment(id, c.step, c.dt, c.purpose);
    for (int a = 0; a < d; ++a) out[a] += c.sigma * dw[a];
    return out;
}

void check(std::span<const LineageIndex> ids, std::span<const Point> pos, std::span<Point> out) {
    if (ids.size() != pos.size() || out.size() != pos.size())
        throw InvalidArgument("move: span sizes differ");
}

} // namespace

void move_serial(std::span<const LineageIndex> ids, std::span<const Point> positions,
                 std::span<Point> out, const MoveContext& ctx) {
    check(ids, positions, out);
    for (std::size_t i = 0; i < ids.size(); ++i) out[i] = move_one(ids[i], positions[i], ctx);
}

void move_omp(std::span<const LineageIndex> ids, std::span<const Point> positions,
              std::span<Point> out, const MoveContext& ctx) {
    check(ids, positions, out);
    const std::ptrdiff_t n = std::ptrdiff_t(ids.size());
#pragma omp parallel for schedule(static) if (n > 256)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = move_one(ids[i], positions[i], ctx);
}

} // namespace pksim::kernels
