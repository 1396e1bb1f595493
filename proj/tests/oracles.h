// Copyright 2026 The antq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ANTQ_TESTS_ORACLES_H
#define ANTQ_TESTS_ORACLES_H

// Reference implementations used only by tests. Each one is written from the
// defining formula without sharing code with the library kernels.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "antq/geometry.h"
#include "antq/ising.h"
#include "antq/rng.h"
#include "antq/schedules.h"

namespace antq::oracle {

using cplx = std::complex<double>;

inline int spin_of(std::uint64_t x, std::size_t i) { return ((x >> i) & 1) ? 1 : -1; }

/// Overlap, coverage and penalty terms summed separately over ordered pairs.
inline double term_cost(const IsingInstance &inst, std::uint64_t x) {
    const std::size_t n = inst.n();
    double overlap = 0.0, coverage = 0.0, pairs = 0.0, linear = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) {
                overlap += spin_of(x, i) * inst.J(i, j) * spin_of(x, j);
                pairs += spin_of(x, i) * spin_of(x, j);
            }
        }
        coverage += inst.A()[i] * spin_of(x, i);
        linear += spin_of(x, i);
    }
    const double dnt = static_cast<double>(n) - 2.0 * static_cast<double>(inst.n_t());
    return overlap - inst.xi() * coverage + inst.lambda() * (pairs + dnt * linear);
}

/// Random instance with arbitrary (not geometric) non-negative couplings.
inline IsingInstance random_instance(std::size_t n, double lambda, std::uint64_t seed, double sparsity = 0.5) {
    Rng rng(seed);
    std::vector<double> J(n * n, 0.0), A(n);
    for (std::size_t i = 0; i < n; ++i) {
        A[i] = 0.05 + rng.uniform();
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = rng.uniform() < sparsity ? 0.0 : rng.uniform();
            J[i * n + j] = J[j * n + i] = v;
        }
    }
    const std::size_t n_t = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n + 1));
    return IsingInstance(J, A, 0.25, lambda, std::min(n_t, n));
}

inline AngleSchedule random_schedule(std::size_t p, std::uint64_t seed, double scale = 1.5) {
    Rng rng(seed);
    std::vector<double> b(p), g(p);
    for (std::size_t k = 0; k < p; ++k) {
        b[k] = scale * (2.0 * rng.uniform() - 1.0);
        g[k] = scale * (2.0 * rng.uniform() - 1.0);
    }
    return AngleSchedule(b, g);
}

using Matrix = std::vector<std::vector<cplx>>;

inline std::vector<cplx> matvec(const Matrix &m, const std::vector<cplx> &v) {
    std::vector<cplx> out(v.size());
    for (std::size_t r = 0; r < v.size(); ++r) {
        cplx s = 0.0;
        for (std::size_t c = 0; c < v.size(); ++c) {
            s += m[r][c] * v[c];
        }
        out[r] = s;
    }
    return out;
}

/// Dense exp(-i beta sum_j X_j) as the tensor product of one-qubit rotations.
inline Matrix dense_mixer(std::size_t n, double beta) {
    const std::size_t dim = std::size_t{1} << n;
    const cplx rx[2][2] = {{std::cos(beta), cplx(0, -std::sin(beta))}, {cplx(0, -std::sin(beta)), std::cos(beta)}};
    Matrix m(dim, std::vector<cplx>(dim));
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            cplx v = 1.0;
            for (std::size_t q = 0; q < n; ++q) {
                v *= rx[(r >> q) & 1][(c >> q) & 1];
            }
            m[r][c] = v;
        }
    }
    return m;
}

/// Full circuit as dense matrix products on |+>^n, costs from term_cost.
inline std::vector<cplx> dense_circuit(const IsingInstance &inst, const AngleSchedule &s) {
    const std::size_t n = inst.n();
    const std::size_t dim = std::size_t{1} << n;
    std::vector<cplx> v(dim, cplx(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
    for (std::size_t k = 0; k < s.depth(); ++k) {
        Matrix phase(dim, std::vector<cplx>(dim));
        for (std::size_t x = 0; x < dim; ++x) {
            phase[x][x] = std::exp(cplx(0, -s.gamma[k] * term_cost(inst, x)));
        }
        v = matvec(dense_mixer(n, s.beta[k]), matvec(phase, v));
    }
    return v;
}

/// Applies a 2x2 gate to qubit q.
inline void gate1(std::vector<cplx> &v, std::size_t q, const cplx g[2][2]) {
    for (std::size_t x = 0; x < v.size(); ++x) {
        if ((x >> q) & 1) {
            continue;
        }
        const std::size_t y = x | (std::size_t{1} << q);
        const cplx a = v[x], b = v[y];
        v[x] = g[0][0] * a + g[0][1] * b;
        v[y] = g[1][0] * a + g[1][1] * b;
    }
}

/// Applies a diagonal 4x4 gate on qubits (q0, q1), entry index b0 + 2 b1.
inline void gate2_diag(std::vector<cplx> &v, std::size_t q0, std::size_t q1, const cplx d[4]) {
    for (std::size_t x = 0; x < v.size(); ++x) {
        v[x] *= d[((x >> q0) & 1) + 2 * ((x >> q1) & 1)];
    }
}

/// Gate-by-gate circuit: ZZ phase gates for couplings, one-qubit Z rotations for
/// fields, X rotations for the mixer. Couplings are J + lambda and fields
/// lambda (n - 2 n_t) - xi A, with each unordered pair counted twice.
inline std::vector<cplx> gate_circuit(const IsingInstance &inst, const AngleSchedule &s) {
    const std::size_t n = inst.n();
    const std::size_t dim = std::size_t{1} << n;
    const double dnt = static_cast<double>(n) - 2.0 * static_cast<double>(inst.n_t());
    std::vector<cplx> v(dim, 0.0);
    v[0] = 1.0;
    const double h = 1.0 / std::sqrt(2.0);
    const cplx hadamard[2][2] = {{h, h}, {h, -h}};
    for (std::size_t q = 0; q < n; ++q) {
        gate1(v, q, hadamard);
    }
    for (std::size_t k = 0; k < s.depth(); ++k) {
        const double g = s.gamma[k];
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double theta = 2.0 * g * (inst.J(i, j) + inst.lambda());
                // exp(-i theta z_i z_j): equal bits give z_i z_j = +1.
                const cplx same = std::exp(cplx(0, -theta)), diff = std::exp(cplx(0, theta));
                const cplx d[4] = {same, diff, diff, same};
                gate2_diag(v, i, j, d);
            }
            const double field = inst.lambda() * dnt - inst.xi() * inst.A()[i];
            const cplx rz[2][2] = {{std::exp(cplx(0, g * field)), 0.0}, {0.0, std::exp(cplx(0, -g * field))}};
            gate1(v, i, rz);
        }
        const double c = std::cos(s.beta[k]), sn = std::sin(s.beta[k]);
        const cplx rx[2][2] = {{c, cplx(0, -sn)}, {cplx(0, -sn), c}};
        for (std::size_t q = 0; q < n; ++q) {
            gate1(v, q, rx);
        }
    }
    return v;
}

/// Intersection area by integrating the vertical chord overlap along x with a
/// composite midpoint rule.
inline double chord_lens_area(const Site &a, const Site &b, std::size_t steps = 200000) {
    const double lo = std::max(a.x - a.r, b.x - b.r), hi = std::min(a.x + a.r, b.x + b.r);
    if (hi <= lo) {
        return 0.0;
    }
    const double h = (hi - lo) / static_cast<double>(steps);
    double sum = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
        const double x = lo + (static_cast<double>(k) + 0.5) * h;
        const double ha = std::sqrt(std::max(0.0, a.r * a.r - (x - a.x) * (x - a.x)));
        const double hb = std::sqrt(std::max(0.0, b.r * b.r - (x - b.x) * (x - b.x)));
        const double top = std::min(a.y + ha, b.y + hb), bottom = std::max(a.y - ha, b.y - hb);
        sum += std::max(0.0, top - bottom);
    }
    return sum * h;
}

inline bool inside(const Site &s, double x, double y) {
    return (x - s.x) * (x - s.x) + (y - s.y) * (y - s.y) <= s.r * s.r;
}

/// Intersection area from `points` samples in the overlap of the two bounding
/// boxes: pseudo-random (Philox) or the R2 low-discrepancy sequence.
inline double sampled_lens_area(const Site &a, const Site &b, std::size_t points, bool quasi,
                                std::uint64_t seed = 1) {
    const double x0 = std::max(a.x - a.r, b.x - b.r), x1 = std::min(a.x + a.r, b.x + b.r);
    const double y0 = std::max(a.y - a.r, b.y - b.r), y1 = std::min(a.y + a.r, b.y + b.r);
    if (x1 <= x0 || y1 <= y0) {
        return 0.0;
    }
    Rng rng(seed);
    constexpr double g = 1.32471795724474602596;  // plastic number
    const double a1 = 1.0 / g, a2 = 1.0 / (g * g);
    std::size_t hits = 0;
    for (std::size_t k = 0; k < points; ++k) {
        double u, v;
        if (quasi) {
            u = std::fmod(0.5 + a1 * static_cast<double>(k + 1), 1.0);
            v = std::fmod(0.5 + a2 * static_cast<double>(k + 1), 1.0);
        } else {
            u = rng.uniform();
            v = rng.uniform();
        }
        const double x = x0 + u * (x1 - x0), y = y0 + v * (y1 - y0);
        hits += inside(a, x, y) && inside(b, x, y);
    }
    return static_cast<double>(hits) / static_cast<double>(points) * (x1 - x0) * (y1 - y0);
}

}  // namespace antq::oracle

#endif
