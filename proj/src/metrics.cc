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

#include "antq/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "antq/errors.h"

namespace antq {

double approx_ratio(double h_exp, double h_min) {
    if (h_min == 0.0) {
        throw DegenerateInstance("approximation ratio undefined for H_min = 0");
    }
    return h_exp / h_min;
}

bool lex_less(std::uint64_t x, std::uint64_t y) {
    const std::uint64_t diff = x ^ y;
    // The lowest differing site decides; the smaller string has a 0 there.
    return diff != 0 && (y & diff & (~diff + 1)) != 0;
}

std::uint64_t most_probable(const Statevector &state) {
    auto amp = state.amplitudes();
    std::uint64_t best = 0;
    double best_p = std::norm(amp[0]);
    for (std::uint64_t x = 1; x < state.dim(); ++x) {
        const double p = std::norm(amp[x]);
        if (p > best_p || (p == best_p && lex_less(x, best))) {
            best = x;
            best_p = p;
        }
    }
    return best;
}

std::uint64_t most_frequent(const ShotCounts &counts) {
    if (counts.counts.empty()) {
        throw InvalidInput("empty shot record");
    }
    auto best = counts.counts.begin();
    for (auto it = std::next(best); it != counts.counts.end(); ++it) {
        if (it->second > best->second || (it->second == best->second && lex_less(it->first, best->first))) {
            best = it;
        }
    }
    return best->first;
}

double approx_ratio_mp(const Statevector &state, const CostTable &table, double h_min) {
    return approx_ratio(table[most_probable(state)], h_min);
}

double approx_ratio_mp(const ShotCounts &counts, const CostTable &table, double h_min) {
    return approx_ratio(table[most_frequent(counts)], h_min);
}

MetricsReport exact_metrics(const Statevector &state, const CostTable &table, const Spectrum &spectrum) {
    MetricsReport r;
    r.h_mean = expectation(state, table);
    r.alpha = approx_ratio(r.h_mean, spectrum.h_min);
    r.alpha_mp = approx_ratio_mp(state, table, spectrum.h_min);
    r.p_gs = ground_probability(state, spectrum);
    r.gs_fraction = *r.p_gs;
    return r;
}

MetricsReport shot_estimators(const ShotCounts &counts, const CostTable &table, const Spectrum &spectrum) {
    if (counts.n_meas == 0) {
        throw InvalidInput("shot record has no measurements");
    }
    const double shots = static_cast<double>(counts.n_meas);
    double sum = 0.0;
    std::uint64_t ground = 0;
    for (auto [x, c] : counts.counts) {
        sum += static_cast<double>(c) * table[x];
        if (std::binary_search(spectrum.ground_strings.begin(), spectrum.ground_strings.end(), x)) {
            ground += c;
        }
    }
    const double mean = sum / shots;
    double squares = 0.0;
    for (auto [x, c] : counts.counts) {
        const double d = table[x] - mean;
        squares += static_cast<double>(c) * d * d;
    }

    MetricsReport r;
    r.n_meas = counts.n_meas;
    r.h_mean = mean;
    r.h_stderr = counts.n_meas > 1 ? std::sqrt(squares / (shots - 1.0)) / std::sqrt(shots) : 0.0;
    r.alpha = approx_ratio(mean, spectrum.h_min);
    r.alpha_mp = approx_ratio_mp(counts, table, spectrum.h_min);
    r.gs_fraction = static_cast<double>(ground) / shots;
    return r;
}

Distribution Distribution::of(const Statevector &state) {
    Distribution d;
    d.index.resize(state.dim());
    std::iota(d.index.begin(), d.index.end(), std::uint64_t{0});
    d.weight = state.probabilities();
    return d;
}

Distribution Distribution::of(const ShotCounts &counts) {
    if (counts.n_meas == 0) {
        throw InvalidInput("shot record has no measurements");
    }
    Distribution d;
    for (auto [x, c] : counts.counts) {
        d.index.push_back(x);
        d.weight.push_back(static_cast<double>(c) / static_cast<double>(counts.n_meas));
    }
    return d;
}

CpCurve cumulative_probability(const Distribution &dist, const CostTable &table, const Spectrum &spectrum,
                               std::span<const double> thresholds) {
    if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
        throw InvalidInput("CP thresholds must be ascending");
    }
    std::vector<std::pair<double, double>> ratio_mass;
    ratio_mass.reserve(dist.index.size());
    for (std::size_t k = 0; k < dist.index.size(); ++k) {
        ratio_mass.emplace_back(approx_ratio(table[dist.index[k]], spectrum.h_min), dist.weight[k]);
    }
    std::sort(ratio_mass.begin(), ratio_mass.end(),
              [](const auto &a, const auto &b) { return a.first > b.first; });
    // tail[k] = mass of the k highest ratios.
    std::vector<double> tail(ratio_mass.size() + 1, 0.0);
    for (std::size_t k = 0; k < ratio_mass.size(); ++k) {
        tail[k + 1] = tail[k] + ratio_mass[k].second;
    }

    CpCurve curve;
    curve.thresholds.assign(thresholds.begin(), thresholds.end());
    for (double t : thresholds) {
        auto end = std::partition_point(ratio_mass.begin(), ratio_mass.end(),
                                        [t](const auto &rm) { return rm.first >= t; });
        curve.values.push_back(tail[static_cast<std::size_t>(end - ratio_mass.begin())]);
    }
    return curve;
}

std::vector<HistogramBin> ratio_histogram(const Distribution &dist, const CostTable &table,
                                          const Spectrum &spectrum, double bin_width) {
    if (!(bin_width > 0.0)) {
        throw InvalidInput("bin width must be positive");
    }
    std::map<long long, double> bins;
    for (std::size_t k = 0; k < dist.index.size(); ++k) {
        if (dist.weight[k] == 0.0) {
            continue;
        }
        const double ratio = approx_ratio(table[dist.index[k]], spectrum.h_min);
        bins[static_cast<long long>(std::floor(ratio / bin_width))] += dist.weight[k];
    }
    std::vector<HistogramBin> out;
    out.reserve(bins.size());
    for (auto [k, mass] : bins) {
        out.push_back({static_cast<double>(k) * bin_width, mass});
    }
    return out;
}

LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw InvalidInput("linear fit needs at least two (x, y) pairs");
    }
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) {
        throw InvalidInput("linear fit needs at least two distinct x values");
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

ExponentialFit fit_exponential(std::span<const double> sizes, std::span<const double> values) {
    std::vector<double> logs;
    logs.reserve(values.size());
    for (double v : values) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw InvalidInput("exponential fit needs finite positive values");
        }
        logs.push_back(std::log(v));
    }
    const LinearFit line = fit_linear(sizes, logs);
    return {std::exp(line.slope), std::exp(line.intercept)};
}

namespace {

ResourceEstimate finish(std::size_t n, std::size_t p, std::uint64_t g2_per_layer) {
    if (p == 0) {
        throw InvalidInput("resource estimate needs depth p >= 1");
    }
    ResourceEstimate r;
    r.n = n;
    r.p = p;
    r.g1_per_layer = 2 * static_cast<std::uint64_t>(n);
    r.g2_per_layer = g2_per_layer;
    r.g1 = r.g1_per_layer * p;
    r.g2 = r.g2_per_layer * p;
    r.total = r.g1 + r.g2;
    return r;
}

}  // namespace

ResourceEstimate resource_estimate(const IsingInstance &inst, std::size_t p) {
    const auto rc = reduced_couplings(inst);
    std::uint64_t pairs = 0;
    for (std::size_t i = 0; i < rc.n; ++i) {
        for (std::size_t j = i + 1; j < rc.n; ++j) {
            if (rc.coupling(i, j) != 0.0) {
                ++pairs;
            }
        }
    }
    return finish(inst.n(), p, pairs);
}

ResourceEstimate resource_estimate(std::size_t n, bool constrained, std::size_t p, double mean_connectivity) {
    const auto nn = static_cast<std::uint64_t>(n);
    const std::uint64_t g2 = constrained
                                 ? nn * (nn - (nn > 0 ? 1 : 0)) / 2
                                 : static_cast<std::uint64_t>(std::llround(mean_connectivity * static_cast<double>(n)));
    return finish(n, p, g2);
}

std::size_t max_sites(std::uint64_t budget, bool constrained, std::size_t p, double mean_connectivity) {
    std::size_t n = 0;
    while (resource_estimate(n + 1, constrained, p, mean_connectivity).total <= budget) {
        ++n;
    }
    return n;
}

std::size_t max_depth(std::uint64_t budget, std::size_t n, bool constrained, double mean_connectivity) {
    const auto layer = resource_estimate(n, constrained, 1, mean_connectivity).total;
    return layer == 0 ? 0 : static_cast<std::size_t>(budget / layer);
}

}  // namespace antq
