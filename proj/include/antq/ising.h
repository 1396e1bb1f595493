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

#ifndef ANTQ_ISING_H
#define ANTQ_ISING_H

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "antq/geometry.h"
#include "json.hpp"

namespace antq {

inline constexpr double kDefaultXi = 0.25;
inline constexpr std::size_t kDefaultBruteForceCap = 28;

/// Antenna-placement Ising problem
///
///   H(z) = sum_{i != j} z_i J_ij z_j - xi sum_i A_i z_i
///          + lambda (sum_{i != j} z_i z_j + delta_n_t sum_i z_i),
///
/// with z_i in {-1, +1}, delta_n_t = n - 2 n_t, and each sum over i != j running over
/// ordered pairs. Immutable after construction.
class IsingInstance {
public:
    /// J is row-major n x n. Throws InvalidInput if any invariant fails.
    IsingInstance(std::vector<double> J, std::vector<double> A, double xi, double lambda,
                  std::size_t n_t);

    std::size_t n() const { return A_.size(); }
    double J(std::size_t i, std::size_t j) const { return J_[i * n() + j]; }
    std::span<const double> J() const { return J_; }
    std::span<const double> A() const { return A_; }
    double xi() const { return xi_; }
    double lambda() const { return lambda_; }
    std::size_t n_t() const { return n_t_; }
    long delta_n_t() const { return static_cast<long>(n()) - 2 * static_cast<long>(n_t_); }

private:
    std::vector<double> J_;
    std::vector<double> A_;
    double xi_;
    double lambda_;
    std::size_t n_t_;
};

/// J_ij = lens_area(i, j), A_i = circle_area(r_i). n_t defaults to floor(n / 2).
IsingInstance build_ising(const SiteSet &sites, double xi = kDefaultXi, double lambda = 0.0,
                          std::optional<std::size_t> n_t = std::nullopt);

/// Binary word, bit i = b_i of site i, z_i = 2 b_i - 1 (bit 1 = active antenna).
struct SpinString {
    std::vector<std::uint8_t> bits;

    static SpinString from_index(std::uint64_t x, std::size_t n);
    /// Parses "0110..." where character i is site i.
    static SpinString parse(const std::string &s);
    std::uint64_t index() const;
    std::string str() const;
    std::size_t size() const { return bits.size(); }
    int spin(std::size_t i) const { return bits[i] ? 1 : -1; }

    bool operator==(const SpinString &) const = default;
};

/// Character i is bit i of x.
std::string bitstring(std::uint64_t x, std::size_t n);

/// Term-by-term cost (overlap + coverage + penalty).
double cost(const IsingInstance &inst, const SpinString &z);
/// Same as above on the basis index x (bit i of x is site i).
double cost(const IsingInstance &inst, std::uint64_t x);

/// Coupling form sum_{i != j} Jt_ij z_i z_j + sum_i At_i z_i of the same cost.
struct ReducedCouplings {
    std::size_t n = 0;
    std::vector<double> J;  ///< symmetric, zero diagonal, row-major
    std::vector<double> A;
    /// Rounding residuals: J[k] + J_lo[k] and A[i] + A_lo[i] carry the couplings to
    /// about twice double precision. reduced_cost uses them.
    std::vector<double> J_lo;
    std::vector<double> A_lo;

    double coupling(std::size_t i, std::size_t j) const { return J[i * n + j]; }
};

/// Jt_ij = J_ij + lambda (i != j), At_i = lambda * delta_n_t - xi * A_i.
ReducedCouplings reduced_couplings(const IsingInstance &inst);
double reduced_cost(const ReducedCouplings &rc, std::uint64_t x);

struct Spectrum {
    double h_min = 0.0;
    std::vector<std::uint64_t> ground_strings;  ///< ascending basis indices
    double gap = 0.0;                           ///< 0 when only one distinct cost exists
    double h_max = 0.0;
};

/// Exhaustive minimization over all 2^n strings. Ties are kept.
Spectrum brute_force(const IsingInstance &inst, std::size_t cap = kDefaultBruteForceCap);
/// Spectrum of an explicit cost table (values[x] = H(x)).
Spectrum spectrum_of(std::span<const double> values);

/// degree -> number of sites, degree_i = #{j != i : Jt_ij != 0}.
std::map<std::size_t, std::size_t> connectivity_histogram(const IsingInstance &inst);
double mean_degree(const std::map<std::size_t, std::size_t> &hist);

/// Instance description as read from disk, before size selection.
///
/// Either geometric (`sites` present) or precomputed (`J`, `A`).
struct InstanceSpec {
    std::optional<SiteSet> sites;
    std::vector<double> J;
    std::vector<double> A;
    std::size_t n = 0;
    double xi = kDefaultXi;
    double lambda = 0.0;
    std::optional<std::size_t> n_t;
    std::string label;

    /// Instance on the first `prefix` sites (all when unset). n_t falls back to
    /// floor(size / 2) when unset or when a strict prefix is taken.
    IsingInstance build(std::optional<std::size_t> prefix = std::nullopt) const;
};

InstanceSpec instance_spec_from_json(const nlohmann::json &j);
InstanceSpec load_instance_spec(const std::filesystem::path &path);
nlohmann::json instance_to_json(const IsingInstance &inst);

}  // namespace antq

#endif
