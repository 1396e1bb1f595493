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

#include "antq/statevector.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "antq/errors.h"

namespace antq {
namespace {

constexpr std::uint64_t kBlock = 4096;
constexpr char kMagic[8] = {'A', 'N', 'T', 'Q', 'S', 'T', 'V', '1'};

static_assert(std::endian::native == std::endian::little, "state dumps assume a little-endian host");

void check_qubits(std::size_t n, std::size_t max_qubits) {
    if (n == 0) {
        throw InvalidInput("statevector needs at least one qubit");
    }
    if (n > max_qubits || n >= 63) {
        throw ResourceLimit("statevector limited to " + std::to_string(max_qubits) + " qubits, requested " +
                            std::to_string(n));
    }
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) {
            s += x;
        }
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

// Per-block partial sums of f(x), combined pairwise. Independent of thread count.
template <typename F>
double blocked_sum(std::uint64_t dim, F f) {
    const std::uint64_t blocks = (dim + kBlock - 1) / kBlock;
    std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
        const std::uint64_t lo = static_cast<std::uint64_t>(b) * kBlock;
        const std::uint64_t hi = std::min(dim, lo + kBlock);
        double s = 0.0;
        for (std::uint64_t x = lo; x < hi; ++x) {
            s += f(x);
        }
        partial[b] = s;
    }
    return pairwise_sum(partial);
}

}  // namespace

CostTable CostTable::build(const IsingInstance &inst, std::size_t table_limit) {
    CostTable t;
    t.n_ = inst.n();
    if (t.n_ >= 63) {
        throw ResourceLimit("cost table limited to 62 qubits");
    }
    if (t.n_ <= table_limit) {
        const std::uint64_t dim = t.dim();
        t.values_.resize(dim);
#pragma omp parallel for schedule(static)
        for (std::int64_t x = 0; x < static_cast<std::int64_t>(dim); ++x) {
            t.values_[x] = cost(inst, static_cast<std::uint64_t>(x));
        }
    } else {
        t.inst_ = inst;
    }
    return t;
}

CostTable CostTable::from_values(std::vector<double> values) {
    if (values.empty() || !std::has_single_bit(values.size())) {
        throw InvalidInput("cost table size must be a power of two");
    }
    CostTable t;
    t.n_ = static_cast<std::size_t>(std::countr_zero(values.size()));
    if (t.n_ == 0) {
        throw InvalidInput("cost table needs at least one qubit");
    }
    t.values_ = std::move(values);
    return t;
}

Statevector Statevector::plus_state(std::size_t n, std::size_t max_qubits) {
    check_qubits(n, max_qubits);
    Statevector s;
    s.n_ = n;
    s.amp_.resize(std::uint64_t{1} << n);
    s.reset_plus();
    return s;
}

Statevector Statevector::basis_state(std::size_t n, std::uint64_t x, std::size_t max_qubits) {
    check_qubits(n, max_qubits);
    Statevector s;
    s.n_ = n;
    s.amp_.assign(std::uint64_t{1} << n, Amplitude{0.0, 0.0});
    if (x >= s.dim()) {
        throw InvalidInput("basis index out of range");
    }
    s.amp_[x] = 1.0;
    return s;
}

Statevector Statevector::from_amplitudes(std::vector<Amplitude> amp) {
    if (amp.size() < 2 || !std::has_single_bit(amp.size())) {
        throw InvalidInput("amplitude count must be a power of two, at least 2");
    }
    Statevector s;
    s.n_ = static_cast<std::size_t>(std::countr_zero(amp.size()));
    s.amp_ = std::move(amp);
    return s;
}

void Statevector::reset_plus() {
    const double a = std::pow(2.0, -0.5 * static_cast<double>(n_));
    std::fill(amp_.begin(), amp_.end(), Amplitude{a, 0.0});
}

double Statevector::norm_squared() const {
    return blocked_sum(dim(), [this](std::uint64_t x) { return std::norm(amp_[x]); });
}

std::vector<double> Statevector::probabilities() const {
    std::vector<double> p(amp_.size());
    for (std::size_t x = 0; x < amp_.size(); ++x) {
        p[x] = std::norm(amp_[x]);
    }
    return p;
}

void apply_phase(Statevector &state, const CostTable &table, double gamma) {
    if (table.n() != state.n()) {
        throw InvalidInput("cost table and state have different qubit counts");
    }
    if (gamma == 0.0) {
        return;
    }
    auto amp = state.amplitudes();
    const std::int64_t dim = static_cast<std::int64_t>(state.dim());
#pragma omp parallel for schedule(static)
    for (std::int64_t x = 0; x < dim; ++x) {
        const double angle = -gamma * table[static_cast<std::uint64_t>(x)];
        amp[x] *= Amplitude{std::cos(angle), std::sin(angle)};
    }
}

void apply_mixer(Statevector &state, double beta) {
    if (beta == 0.0) {
        return;
    }
    const double c = std::cos(beta);
    const double s = std::sin(beta);
    auto amp = state.amplitudes();
    const std::int64_t pairs = static_cast<std::int64_t>(state.dim() / 2);
    for (std::size_t q = 0; q < state.n(); ++q) {
        const std::uint64_t bit = std::uint64_t{1} << q;
        const std::uint64_t low_mask = bit - 1;
#pragma omp parallel for schedule(static)
        for (std::int64_t k = 0; k < pairs; ++k) {
            const auto uk = static_cast<std::uint64_t>(k);
            const std::uint64_t x0 = ((uk & ~low_mask) << 1) | (uk & low_mask);
            const std::uint64_t x1 = x0 | bit;
            const Amplitude a = amp[x0];
            const Amplitude b = amp[x1];
            // (a, b) -> (cos a - i sin b, cos b - i sin a)
            amp[x0] = {c * a.real() + s * b.imag(), c * a.imag() - s * b.real()};
            amp[x1] = {c * b.real() + s * a.imag(), c * b.imag() - s * a.real()};
        }
    }
}

void run_circuit_into(Statevector &state, const CostTable &table, const AngleSchedule &sched) {
    if (table.n() != state.n()) {
        throw InvalidInput("cost table and state have different qubit counts");
    }
    state.reset_plus();
    for (std::size_t k = 0; k < sched.depth(); ++k) {
        apply_phase(state, table, sched.gamma[k]);
        apply_mixer(state, sched.beta[k]);
    }
}

Statevector run_circuit(const CostTable &table, const AngleSchedule &sched, std::size_t max_qubits) {
    Statevector state = Statevector::plus_state(table.n(), max_qubits);
    run_circuit_into(state, table, sched);
    return state;
}

Statevector run_circuit(const IsingInstance &inst, const AngleSchedule &sched) {
    check_qubits(inst.n(), kDefaultMaxQubits);
    return run_circuit(CostTable::build(inst), sched);
}

double expectation(const Statevector &state, const CostTable &table) {
    if (table.n() != state.n()) {
        throw InvalidInput("cost table and state have different qubit counts");
    }
    auto amp = state.amplitudes();
    return blocked_sum(state.dim(), [&](std::uint64_t x) { return std::norm(amp[x]) * table[x]; });
}

double probability_of(const Statevector &state, std::uint64_t x) {
    if (x >= state.dim()) {
        throw InvalidInput("basis index out of range");
    }
    return std::norm(state[x]);
}

double probability_of(const Statevector &state, const SpinString &z) {
    if (z.size() != state.n()) {
        throw InvalidInput("spin string length does not match the state");
    }
    return probability_of(state, z.index());
}

double ground_probability(const Statevector &state, const Spectrum &spectrum) {
    double p = 0.0;
    for (std::uint64_t x : spectrum.ground_strings) {
        p += probability_of(state, x);
    }
    return p;
}

ShotCounts sample(const Statevector &state, std::uint64_t n_meas, Rng rng) {
    if (n_meas == 0) {
        throw InvalidInput("need at least one shot");
    }
    const double total = state.norm_squared();
    std::vector<double> draws(n_meas);
    for (double &u : draws) {
        u = rng.uniform() * total;
    }
    std::sort(draws.begin(), draws.end());

    ShotCounts out;
    out.n = state.n();
    out.n_meas = n_meas;
    auto amp = state.amplitudes();
    std::uint64_t last_nonzero = 0;
    double cumulative = 0.0;
    std::size_t next = 0;
    for (std::uint64_t x = 0; x < state.dim() && next < draws.size(); ++x) {
        const double p = std::norm(amp[x]);
        if (p == 0.0) {
            continue;
        }
        last_nonzero = x;
        cumulative += p;
        std::uint64_t hits = 0;
        while (next < draws.size() && draws[next] < cumulative) {
            ++hits;
            ++next;
        }
        if (hits > 0) {
            out.counts[x] += hits;
        }
    }
    // Rounding in the running sum can leave the top draws uncovered.
    if (next < draws.size()) {
        out.counts[last_nonzero] += draws.size() - next;
    }
    return out;
}

ShotCounts sample(const Statevector &state, std::uint64_t n_meas, std::uint64_t seed) {
    return sample(state, n_meas, Rng(seed));
}

void save_state(const Statevector &state, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InvalidInput("cannot write state dump " + path.string());
    }
    const std::uint64_t n = state.n();
    out.write(kMagic, sizeof kMagic);
    out.write(reinterpret_cast<const char *>(&n), sizeof n);
    out.write(reinterpret_cast<const char *>(state.amplitudes().data()),
              static_cast<std::streamsize>(state.dim() * sizeof(Amplitude)));
}

Statevector load_state(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open state dump " + path.string());
    }
    char magic[8];
    std::uint64_t n = 0;
    in.read(magic, sizeof magic);
    in.read(reinterpret_cast<char *>(&n), sizeof n);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
        throw ParseError(path.string() + ": not a state dump");
    }
    if (n == 0 || n > kDefaultMaxQubits) {
        throw ParseError(path.string() + ": unsupported qubit count " + std::to_string(n));
    }
    std::vector<Amplitude> amp(std::uint64_t{1} << n);
    in.read(reinterpret_cast<char *>(amp.data()), static_cast<std::streamsize>(amp.size() * sizeof(Amplitude)));
    if (!in) {
        throw ParseError(path.string() + ": truncated amplitude block");
    }
    return Statevector::from_amplitudes(std::move(amp));
}

}  // namespace antq
