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

#ifndef ANTQ_METRICS_H
#define ANTQ_METRICS_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "antq/ising.h"
#include "antq/statevector.h"

namespace antq {

/// alpha = <H> / H_min. Throws DegenerateInstance when h_min == 0.
double approx_ratio(double h_exp, double h_min);

/// Most probable basis state; equal probabilities resolve to the lexicographically
/// smallest bitstring (site 0 first).
std::uint64_t most_probable(const Statevector &state);
/// Most frequent measured string, same tie rule.
std::uint64_t most_frequent(const ShotCounts &counts);

/// True when bitstring(x) < bitstring(y) in site order.
bool lex_less(std::uint64_t x, std::uint64_t y);

double approx_ratio_mp(const Statevector &state, const CostTable &table, double h_min);
double approx_ratio_mp(const ShotCounts &counts, const CostTable &table, double h_min);

struct MetricsReport {
    double alpha = 0.0;
    double alpha_mp = 0.0;
    /// Exact ground-state probability; absent for a pure shot record.
    std::optional<double> p_gs;
    /// N_gs / N_meas for shots, p_gs for exact states.
    double gs_fraction = 0.0;
    std::uint64_t n_meas = 0;  ///< 0 for exact mode
    double h_mean = 0.0;       ///< <H> or its mean estimator
    double h_stderr = 0.0;     ///< sample std / sqrt(n_meas); 0 for exact mode
};

MetricsReport exact_metrics(const Statevector &state, const CostTable &table, const Spectrum &spectrum);
/// Mean estimator of <H>, most-frequent ratio and ground-state count fraction.
MetricsReport shot_estimators(const ShotCounts &counts, const CostTable &table, const Spectrum &spectrum);

/// Probability mass over basis indices. Built from a state (|amp|^2) or from counts
/// (normalized multiplicities).
struct Distribution {
    std::vector<std::uint64_t> index;
    std::vector<double> weight;

    static Distribution of(const Statevector &state);
    static Distribution of(const ShotCounts &counts);
};

struct CpCurve {
    std::vector<double> thresholds;
    std::vector<double> values;
};

/// CP(a) = sum of weights of strings whose ratio H(z)/H_min is >= a.
CpCurve cumulative_probability(const Distribution &dist, const CostTable &table, const Spectrum &spectrum,
                               std::span<const double> thresholds);

struct HistogramBin {
    double lo = 0.0;
    double mass = 0.0;
};

/// Mass per ratio bin [k w, (k + 1) w), ascending, non-empty bins only.
std::vector<HistogramBin> ratio_histogram(const Distribution &dist, const CostTable &table,
                                          const Spectrum &spectrum, double bin_width = 0.01);

struct ExponentialFit {
    double base = 1.0;
    double prefactor = 1.0;
};

/// Least squares of log(y) against N; y ~ prefactor * base^N.
ExponentialFit fit_exponential(std::span<const double> sizes, std::span<const double> values);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LinearFit fit_linear(std::span<const double> x, std::span<const double> y);

/// Gate counts, one two-qubit interaction per coupled pair per layer.
struct ResourceEstimate {
    std::size_t n = 0;
    std::size_t p = 1;
    std::uint64_t g1_per_layer = 0;
    std::uint64_t g2_per_layer = 0;
    std::uint64_t g1 = 0;
    std::uint64_t g2 = 0;
    std::uint64_t total = 0;
};

inline constexpr std::uint64_t kReferenceGateBudget = 2880;
inline constexpr double kSparseMeanConnectivity = 5.0;

/// Counts the nonzero reduced-coupling pairs of this instance.
ResourceEstimate resource_estimate(const IsingInstance &inst, std::size_t p);
/// Closed form: 2N single-qubit gates per layer; N(N-1)/2 two-qubit gates per layer
/// when constrained, round(c N) otherwise.
ResourceEstimate resource_estimate(std::size_t n, bool constrained, std::size_t p,
                                   double mean_connectivity = kSparseMeanConnectivity);

/// Largest N whose depth-p formula total fits the budget (0 if none).
std::size_t max_sites(std::uint64_t budget, bool constrained, std::size_t p,
                      double mean_connectivity = kSparseMeanConnectivity);
/// Largest depth whose formula total fits the budget (0 if none).
std::size_t max_depth(std::uint64_t budget, std::size_t n, bool constrained,
                      double mean_connectivity = kSparseMeanConnectivity);

}  // namespace antq

#endif
