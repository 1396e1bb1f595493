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

#ifndef ANTQ_SCHEDULES_H
#define ANTQ_SCHEDULES_H

#include <cstddef>
#include <cstdint>
#include <vector>

#include "json.hpp"

namespace antq {

/// Per-layer mixer (beta) and phase (gamma) angles. Layer k of the circuit is
/// exp(-i beta[k] sum_j X_j) exp(-i gamma[k] H). gamma carries 1/energy units.
struct AngleSchedule {
    std::vector<double> beta;
    std::vector<double> gamma;

    AngleSchedule() = default;
    AngleSchedule(std::vector<double> b, std::vector<double> g);

    std::size_t depth() const { return beta.size(); }
    /// [beta_1..beta_p, gamma_1..gamma_p]
    std::vector<double> flatten() const;
    static AngleSchedule unflatten(const std::vector<double> &params);

    bool operator==(const AngleSchedule &) const = default;
};

nlohmann::json schedule_to_json(const AngleSchedule &s);
AngleSchedule schedule_from_json(const nlohmann::json &j);

struct QaaConfig {
    std::size_t p = 1;
    double delta = 0.5;
};

/// beta_k = delta (1 - k/p), gamma_k = delta k / p for k = 1..p.
AngleSchedule linear_qaa(std::size_t p, double delta);
inline AngleSchedule linear_qaa(const QaaConfig &cfg) { return linear_qaa(cfg.p, cfg.delta); }

/// Circuit angles of the discretized anneal: linear_qaa with every beta negated.
///
/// |+>^n is the ground state of -sum_j X_j, so the anneal must run from that driver
/// to H. With the mixer exp(-i beta sum_j X_j), the positive ramp follows the top
/// eigenstate instead and ends in the maximum-cost string.
AngleSchedule qaa_circuit_schedule(const QaaConfig &cfg);

/// INTERP extension to depth p + 1 applied to beta and gamma separately:
/// t'_k = ((k-1)/p) t_{k-1} + ((p-k+1)/p) t_k, k = 1..p+1, with t_0 = t_{p+1} = 0.
AngleSchedule interp_extend(const AngleSchedule &s);

/// Depth p + 1 schedule whose last layer has zero angles. It prepares exactly the
/// same state as `s`.
AngleSchedule append_zero_layer(const AngleSchedule &s);

inline constexpr double kDefaultWalkerRadius = 0.1;

/// `m` schedules; walker 0 is `center`, the others perturb every angle by an
/// independent uniform draw from [-rho, +rho].
std::vector<AngleSchedule> walker_cloud(const AngleSchedule &center, double rho, std::size_t m,
                                        std::uint64_t seed);

}  // namespace antq

#endif
