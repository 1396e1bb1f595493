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

#ifndef ANTQ_OPTIMIZER_H
#define ANTQ_OPTIMIZER_H

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "antq/metrics.h"
#include "antq/rng.h"
#include "antq/schedules.h"
#include "antq/statevector.h"

namespace antq {

/// Finite-measurement evaluation: every objective call draws `n_meas` fresh shots
/// from substream (call index) of `stream`.
struct ShotMode {
    std::uint64_t n_meas = 10000;
    Rng stream{0};
};

/// <H> of the circuit state for a schedule, exact or estimated from shots.
class Objective {
public:
    Objective(const CostTable &table, std::optional<ShotMode> shots = std::nullopt);

    double operator()(const AngleSchedule &sched);
    std::size_t evaluations() const { return evaluations_; }
    bool exact() const { return !shots_.has_value(); }
    /// State prepared by the most recent call.
    const Statevector &state() const { return workspace_; }

private:
    const CostTable *table_;
    std::optional<ShotMode> shots_;
    Statevector workspace_;
    std::size_t evaluations_ = 0;
};

inline constexpr std::size_t kDefaultIterations = 50;

struct OptimizerConfig {
    std::size_t max_evals = kDefaultIterations;
    /// Stop once the simplex spread in value and position falls below this.
    double tolerance = 1e-8;
    /// Edge length of the starting simplex.
    double initial_step = 0.1;
    std::uint64_t seed = 0;
};

struct LocalResult {
    std::vector<double> params;
    double value = 0.0;
    std::size_t evals = 0;
};

/// Nelder-Mead with a hard evaluation budget. Returns the best point evaluated,
/// which is never worse than `start`.
LocalResult minimize_local(const std::function<double(const std::vector<double> &)> &f,
                           const std::vector<double> &start, const OptimizerConfig &cfg);

struct ScheduleResult {
    AngleSchedule schedule;
    double value = 0.0;
    std::size_t evals = 0;
};

ScheduleResult minimize_local(Objective &obj, const AngleSchedule &start, const OptimizerConfig &cfg);

struct DepthRecord {
    std::size_t p = 0;
    AngleSchedule schedule;
    double value = 0.0;
    double start_value = 0.0;  ///< objective at the INTERP (or grid) start point
    double alpha = 0.0;        ///< value / H_min
    /// Winning candidate: walker id, or `walkers` for the zero-layer extension.
    std::size_t walker = 0;
    std::size_t evals = 0;
    std::size_t p_tot = 0;  ///< max_evals * p
};

struct DepthLadderResult {
    std::vector<DepthRecord> records;
};

struct LadderConfig {
    std::size_t p_max = 1;
    std::size_t walkers = 1;
    double rho = kDefaultWalkerRadius;
    OptimizerConfig optimizer;
    std::uint64_t seed = 0;
    std::optional<ShotMode> shots;
    /// Side length of the depth-1 start grid: beta in [-pi/2, pi/2), gamma in (0, pi/2].
    std::size_t grid = 8;
    /// Called after every depth; returning false stops the ladder.
    std::function<bool(const DepthRecord &)> on_depth;
};

/// QAOA depth ladder: grid start at p = 1, then INTERP + walker cloud and the
/// zero-layer extension of the previous best at each deeper level.
DepthLadderResult qaoa_ladder(const CostTable &table, const Spectrum &spectrum, const LadderConfig &cfg);

struct QaaResult {
    AngleSchedule schedule;
    Statevector state;
    double energy = 0.0;  ///< exact <H>
    std::optional<ShotCounts> counts;
    MetricsReport metrics;  ///< exact, or shot estimators when counts are present
};

QaaResult qaa_run(const CostTable &table, const Spectrum &spectrum, const QaaConfig &cfg,
                  std::optional<ShotMode> shots = std::nullopt);

struct SweepRow {
    std::size_t p = 0;
    double delta = 0.0;
    double energy = 0.0;
};

/// Exact <H> for every (p, delta) pair, p-major.
std::vector<SweepRow> delta_sweep(const CostTable &table, const std::vector<std::size_t> &depths,
                                  const std::vector<double> &deltas);
/// Delta with the lowest energy at depth p; ties pick the smaller delta.
double best_delta(const std::vector<SweepRow> &rows, std::size_t p);

struct QaaSolver {
    double delta = 0.5;
};

struct QaoaSolver {
    LadderConfig ladder;
};

struct PminResult {
    std::optional<std::size_t> p_min;
    /// (p, alpha) for every grid point evaluated.
    std::vector<std::pair<std::size_t, double>> trace;
};

/// Smallest grid depth whose approximation ratio (estimated when `shots` is set)
/// reaches the threshold.
PminResult pmin_search(const CostTable &table, const Spectrum &spectrum,
                       const std::variant<QaaSolver, QaoaSolver> &solver, double alpha_threshold,
                       const std::vector<std::size_t> &p_grid, std::optional<ShotMode> shots = std::nullopt);

}  // namespace antq

#endif
