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

#ifndef ANTQ_STATEVECTOR_H
#define ANTQ_STATEVECTOR_H

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "antq/ising.h"
#include "antq/rng.h"
#include "antq/schedules.h"

namespace antq {

using Amplitude = std::complex<double>;

inline constexpr std::size_t kDefaultMaxQubits = 28;
inline constexpr std::size_t kDefaultTableQubits = 26;

/// Diagonal of the cost operator: value(x) = cost(inst, x).
///
/// Precomputed up to `table_limit` qubits; above that every lookup re-evaluates cost().
class CostTable {
public:
    static CostTable build(const IsingInstance &inst, std::size_t table_limit = kDefaultTableQubits);
    /// Explicit diagonal, size must be a power of two.
    static CostTable from_values(std::vector<double> values);

    std::size_t n() const { return n_; }
    std::uint64_t dim() const { return std::uint64_t{1} << n_; }
    bool precomputed() const { return !values_.empty(); }
    double operator[](std::uint64_t x) const { return precomputed() ? values_[x] : cost(*inst_, x); }
    /// Empty in on-the-fly mode.
    std::span<const double> values() const { return values_; }

private:
    std::size_t n_ = 0;
    std::vector<double> values_;
    std::optional<IsingInstance> inst_;
};

/// 2^n amplitudes; bit i of the basis index is the bit of site i.
class Statevector {
public:
    static Statevector plus_state(std::size_t n, std::size_t max_qubits = kDefaultMaxQubits);
    static Statevector basis_state(std::size_t n, std::uint64_t x, std::size_t max_qubits = kDefaultMaxQubits);
    static Statevector from_amplitudes(std::vector<Amplitude> amp);

    std::size_t n() const { return n_; }
    std::uint64_t dim() const { return amp_.size(); }
    std::span<const Amplitude> amplitudes() const { return amp_; }
    std::span<Amplitude> amplitudes() { return amp_; }
    Amplitude operator[](std::uint64_t x) const { return amp_[x]; }

    double norm_squared() const;
    std::vector<double> probabilities() const;

    /// Resets to |+>^n without reallocating.
    void reset_plus();

private:
    std::size_t n_ = 0;
    std::vector<Amplitude> amp_;
};

/// amp_x <- amp_x exp(-i gamma H(x)).
void apply_phase(Statevector &state, const CostTable &table, double gamma);
/// exp(-i beta sum_j X_j), one X-rotation per qubit.
void apply_mixer(Statevector &state, double beta);

/// Layers applied to |+>^n in order, phase first within each layer.
Statevector run_circuit(const CostTable &table, const AngleSchedule &sched,
                        std::size_t max_qubits = kDefaultMaxQubits);
Statevector run_circuit(const IsingInstance &inst, const AngleSchedule &sched);
/// Re-runs the circuit in an existing workspace of the right size.
void run_circuit_into(Statevector &state, const CostTable &table, const AngleSchedule &sched);

/// sum_x |amp_x|^2 H(x), summed pairwise over fixed-size blocks.
double expectation(const Statevector &state, const CostTable &table);

double probability_of(const Statevector &state, std::uint64_t x);
double probability_of(const Statevector &state, const SpinString &z);
/// Total probability of all ground strings.
double ground_probability(const Statevector &state, const Spectrum &spectrum);

/// Measurement record: basis index -> multiplicity.
struct ShotCounts {
    std::size_t n = 0;
    std::uint64_t n_meas = 0;
    std::map<std::uint64_t, std::uint64_t> counts;
};

/// `n_meas` i.i.d. draws from |amp|^2.
ShotCounts sample(const Statevector &state, std::uint64_t n_meas, Rng rng);
ShotCounts sample(const Statevector &state, std::uint64_t n_meas, std::uint64_t seed);

/// Binary dump: 8-byte magic "ANTQSTV1", little-endian uint64 n, then 2^n
/// (real, imag) little-endian doubles.
void save_state(const Statevector &state, const std::filesystem::path &path);
Statevector load_state(const std::filesystem::path &path);

}  // namespace antq

#endif
