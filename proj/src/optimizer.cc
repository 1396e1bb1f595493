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

#include "antq/optimizer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "antq/errors.h"

namespace antq {

Objective::Objective(const CostTable &table, std::optional<ShotMode> shots)
    : table_(&table), shots_(std::move(shots)), workspace_(Statevector::plus_state(table.n())) {
    if (shots_ && shots_->n_meas == 0) {
        throw InvalidInput("shot mode needs n_meas >= 1");
    }
}

double Objective::operator()(const AngleSchedule &sched) {
    run_circuit_into(workspace_, *table_, sched);
    const std::size_t call = evaluations_++;
    if (!shots_) {
        return expectation(workspace_, *table_);
    }
    const ShotCounts counts = sample(workspace_, shots_->n_meas, shots_->stream.substream(call));
    double sum = 0.0;
    for (auto [x, c] : counts.counts) {
        sum += static_cast<double>(c) * (*table_)[x];
    }
    return sum / static_cast<double>(counts.n_meas);
}

namespace {

struct Vertex {
    std::vector<double> x;
    double f = 0.0;
};

}  // namespace

LocalResult minimize_local(const std::function<double(const std::vector<double> &)> &f,
                           const std::vector<double> &start, const OptimizerConfig &cfg) {
    if (cfg.max_evals == 0) {
        throw InvalidInput("optimizer budget must be at least one evaluation");
    }
    for (double v : start) {
        if (!std::isfinite(v)) {
            throw InvalidInput("optimizer start point must be finite");
        }
    }

    LocalResult best;
    auto eval = [&](const std::vector<double> &x) {
        const double v = f(x);
        ++best.evals;
        if (best.evals == 1 || v < best.value) {
            best.value = v;
            best.params = x;
        }
        return v;
    };
    auto budget_left = [&] { return best.evals < cfg.max_evals; };

    const std::size_t d = start.size();
    std::vector<Vertex> simplex;
    simplex.push_back({start, eval(start)});
    for (std::size_t i = 0; i < d && budget_left(); ++i) {
        Vertex v{start, 0.0};
        v.x[i] += cfg.initial_step;
        v.f = eval(v.x);
        simplex.push_back(std::move(v));
    }
    if (simplex.size() < d + 1 || d == 0) {
        return best;
    }

    constexpr double kReflect = 1.0;
    constexpr double kExpand = 2.0;
    constexpr double kContract = 0.5;
    constexpr double kShrink = 0.5;

    auto affine = [d](const std::vector<double> &a, const std::vector<double> &b, double t) {
        // a + t (b - a)
        std::vector<double> out(d);
        for (std::size_t i = 0; i < d; ++i) {
            out[i] = a[i] + t * (b[i] - a[i]);
        }
        return out;
    };

    while (budget_left()) {
        std::stable_sort(simplex.begin(), simplex.end(), [](const Vertex &a, const Vertex &b) { return a.f < b.f; });

        double spread = 0.0;
        for (std::size_t k = 1; k <= d; ++k) {
            for (std::size_t i = 0; i < d; ++i) {
                spread = std::max(spread, std::abs(simplex[k].x[i] - simplex[0].x[i]));
            }
        }
        if (std::abs(simplex[d].f - simplex[0].f) <= cfg.tolerance && spread <= cfg.tolerance) {
            break;
        }

        std::vector<double> centroid(d, 0.0);
        for (std::size_t k = 0; k < d; ++k) {
            for (std::size_t i = 0; i < d; ++i) {
                centroid[i] += simplex[k].x[i];
            }
        }
        for (double &c : centroid) {
            c /= static_cast<double>(d);
        }

        Vertex &worst = simplex[d];
        Vertex reflected{affine(centroid, worst.x, -kReflect), 0.0};
        reflected.f = eval(reflected.x);

        if (reflected.f < simplex[0].f) {
            if (!budget_left()) {
                worst = std::move(reflected);
                break;
            }
            Vertex expanded{affine(centroid, worst.x, -kExpand), 0.0};
            expanded.f = eval(expanded.x);
            worst = expanded.f < reflected.f ? std::move(expanded) : std::move(reflected);
            continue;
        }
        if (reflected.f < simplex[d - 1].f) {
            worst = std::move(reflected);
            continue;
        }
        if (!budget_left()) {
            break;
        }
        const bool outside = reflected.f < worst.f;
        Vertex contracted{outside ? affine(centroid, reflected.x, kContract) : affine(centroid, worst.x, kContract),
                          0.0};
        contracted.f = eval(contracted.x);
        if (contracted.f < std::min(reflected.f, worst.f)) {
            worst = std::move(contracted);
            continue;
        }
        for (std::size_t k = 1; k <= d && budget_left(); ++k) {
            simplex[k].x = affine(simplex[0].x, simplex[k].x, kShrink);
            simplex[k].f = eval(simplex[k].x);
        }
    }
    return best;
}

ScheduleResult minimize_local(Objective &obj, const AngleSchedule &start, const OptimizerConfig &cfg) {
    auto f = [&](const std::vector<double> &params) { return obj(AngleSchedule::unflatten(params)); };
    LocalResult r = minimize_local(f, start.flatten(), cfg);
    return {AngleSchedule::unflatten(r.params), r.value, r.evals};
}

namespace {

std::optional<ShotMode> child_shots(const std::optional<ShotMode> &shots, std::size_t depth, std::size_t walker) {
    if (!shots) {
        return std::nullopt;
    }
    return ShotMode{shots->n_meas, shots->stream.substream(depth).substream(walker)};
}

}  // namespace

DepthLadderResult qaoa_ladder(const CostTable &table, const Spectrum &spectrum, const LadderConfig &cfg) {
    if (cfg.p_max == 0) {
        throw InvalidInput("ladder needs p_max >= 1");
    }
    if (cfg.walkers == 0) {
        throw InvalidInput("ladder needs at least one walker");
    }
    if (cfg.grid == 0) {
        throw InvalidInput("start grid needs at least one point per axis");
    }
    if (spectrum.h_min == 0.0) {
        throw DegenerateInstance("approximation ratio undefined for H_min = 0");
    }

    const Rng seeds(cfg.seed);
    DepthLadderResult out;
    AngleSchedule center;
    std::size_t center_evals = 0;

    {
        // Depth 1: cell midpoints of beta in [-pi/2, pi/2) (one mixer period) and
        // gamma in (0, pi/2]. (beta, gamma) -> (-beta, -gamma) leaves <H> unchanged.
        Objective grid_obj(table, child_shots(cfg.shots, 0, 0));
        const double beta_step = std::numbers::pi / static_cast<double>(cfg.grid);
        const double gamma_step = (std::numbers::pi / 2.0) / static_cast<double>(cfg.grid);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < cfg.grid; ++i) {
            for (std::size_t j = 0; j < cfg.grid; ++j) {
                AngleSchedule s({-std::numbers::pi / 2.0 + (static_cast<double>(i) + 0.5) * beta_step},
                                {(static_cast<double>(j) + 0.5) * gamma_step});
                const double v = grid_obj(s);
                if (v < best) {
                    best = v;
                    center = s;
                }
            }
        }
        center_evals = grid_obj.evaluations();
    }

    std::optional<AngleSchedule> previous_best;
    for (std::size_t p = 1; p <= cfg.p_max; ++p) {
        if (p > 1) {
            center = interp_extend(*previous_best);
        }
        std::vector<AngleSchedule> starts =
            walker_cloud(center, cfg.rho, cfg.walkers, seeds.substream(p).next_u64());
        if (previous_best) {
            starts.push_back(append_zero_layer(*previous_best));
        }

        std::vector<ScheduleResult> results(starts.size());
        std::vector<double> start_values(starts.size());
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t w = 0; w < static_cast<std::int64_t>(starts.size()); ++w) {
            Objective obj(table, child_shots(cfg.shots, p, static_cast<std::size_t>(w)));
            OptimizerConfig oc = cfg.optimizer;
            std::vector<double> first_value;
            auto f = [&](const std::vector<double> &params) {
                const double v = obj(AngleSchedule::unflatten(params));
                if (first_value.empty()) {
                    first_value.push_back(v);
                }
                return v;
            };
            LocalResult r = minimize_local(f, starts[w].flatten(), oc);
            results[w] = {AngleSchedule::unflatten(r.params), r.value, r.evals};
            start_values[w] = first_value.front();
        }

        std::size_t winner = 0;
        std::size_t evals = center_evals;
        center_evals = 0;
        for (std::size_t w = 0; w < results.size(); ++w) {
            evals += results[w].evals;
            if (results[w].value < results[winner].value) {
                winner = w;
            }
        }

        DepthRecord rec;
        rec.p = p;
        rec.schedule = results[winner].schedule;
        rec.value = results[winner].value;
        rec.start_value = start_values[0];
        rec.alpha = rec.value / spectrum.h_min;
        rec.walker = winner;
        rec.evals = evals;
        rec.p_tot = cfg.optimizer.max_evals * p;
        previous_best = rec.schedule;
        out.records.push_back(rec);
        if (cfg.on_depth && !cfg.on_depth(out.records.back())) {
            break;
        }
    }
    return out;
}

QaaResult qaa_run(const CostTable &table, const Spectrum &spectrum, const QaaConfig &cfg,
                  std::optional<ShotMode> shots) {
    QaaResult r{qaa_circuit_schedule(cfg), Statevector::plus_state(table.n()), 0.0, std::nullopt, {}};
    run_circuit_into(r.state, table, r.schedule);
    r.energy = expectation(r.state, table);
    if (shots) {
        r.counts = sample(r.state, shots->n_meas, shots->stream);
        r.metrics = shot_estimators(*r.counts, table, spectrum);
        r.metrics.p_gs = ground_probability(r.state, spectrum);
    } else {
        r.metrics = exact_metrics(r.state, table, spectrum);
    }
    return r;
}

std::vector<SweepRow> delta_sweep(const CostTable &table, const std::vector<std::size_t> &depths,
                                  const std::vector<double> &deltas) {
    if (depths.empty() || deltas.empty()) {
        throw InvalidInput("delta sweep needs at least one depth and one delta");
    }
    std::vector<SweepRow> rows;
    rows.reserve(depths.size() * deltas.size());
    Statevector state = Statevector::plus_state(table.n());
    for (std::size_t p : depths) {
        for (double delta : deltas) {
            run_circuit_into(state, table, qaa_circuit_schedule({p, delta}));
            rows.push_back({p, delta, expectation(state, table)});
        }
    }
    return rows;
}

double best_delta(const std::vector<SweepRow> &rows, std::size_t p) {
    const SweepRow *best = nullptr;
    for (const auto &row : rows) {
        if (row.p != p) {
            continue;
        }
        if (!best || row.energy < best->energy || (row.energy == best->energy && row.delta < best->delta)) {
            best = &row;
        }
    }
    if (!best) {
        throw NotFound("no sweep rows at depth " + std::to_string(p));
    }
    return best->delta;
}

PminResult pmin_search(const CostTable &table, const Spectrum &spectrum,
                       const std::variant<QaaSolver, QaoaSolver> &solver, double alpha_threshold,
                       const std::vector<std::size_t> &p_grid, std::optional<ShotMode> shots) {
    if (p_grid.empty()) {
        throw InvalidInput("p grid is empty");
    }
    if (p_grid.front() == 0 || !std::is_sorted(p_grid.begin(), p_grid.end()) ||
        std::adjacent_find(p_grid.begin(), p_grid.end()) != p_grid.end()) {
        throw InvalidInput("p grid must be strictly ascending and start at p >= 1");
    }

    PminResult out;
    if (const auto *qaa = std::get_if<QaaSolver>(&solver)) {
        for (std::size_t p : p_grid) {
            std::optional<ShotMode> point_shots;
            if (shots) {
                point_shots = ShotMode{shots->n_meas, shots->stream.substream(p)};
            }
            const QaaResult r = qaa_run(table, spectrum, {p, qaa->delta}, point_shots);
            out.trace.emplace_back(p, r.metrics.alpha);
            if (r.metrics.alpha >= alpha_threshold) {
                out.p_min = p;
                break;
            }
        }
        return out;
    }

    LadderConfig ladder = std::get<QaoaSolver>(solver).ladder;
    ladder.p_max = p_grid.back();
    if (!ladder.shots) {
        ladder.shots = shots;
    }
    auto user_hook = ladder.on_depth;
    ladder.on_depth = [&](const DepthRecord &rec) {
        if (user_hook && !user_hook(rec)) {
            return false;
        }
        if (!std::binary_search(p_grid.begin(), p_grid.end(), rec.p)) {
            return true;
        }
        out.trace.emplace_back(rec.p, rec.alpha);
        if (rec.alpha >= alpha_threshold) {
            out.p_min = rec.p;
            return false;
        }
        return true;
    };
    (void)qaoa_ladder(table, spectrum, ladder);
    return out;
}

}  // namespace antq
