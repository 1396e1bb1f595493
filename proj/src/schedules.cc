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

#include "antq/schedules.h"

#include <cmath>

#include "antq/errors.h"
#include "antq/rng.h"

namespace antq {

AngleSchedule::AngleSchedule(std::vector<double> b, std::vector<double> g)
    : beta(std::move(b)), gamma(std::move(g)) {
    if (beta.size() != gamma.size()) {
        throw InvalidInput("beta and gamma must have the same length");
    }
    for (std::size_t k = 0; k < beta.size(); ++k) {
        if (!std::isfinite(beta[k]) || !std::isfinite(gamma[k])) {
            throw InvalidInput("schedule angles must be finite");
        }
    }
}

std::vector<double> AngleSchedule::flatten() const {
    std::vector<double> out(beta);
    out.insert(out.end(), gamma.begin(), gamma.end());
    return out;
}

AngleSchedule AngleSchedule::unflatten(const std::vector<double> &params) {
    if (params.size() % 2 != 0) {
        throw InvalidInput("flattened schedule must have even length");
    }
    const auto half = static_cast<std::ptrdiff_t>(params.size() / 2);
    return AngleSchedule({params.begin(), params.begin() + half}, {params.begin() + half, params.end()});
}

nlohmann::json schedule_to_json(const AngleSchedule &s) {
    return {{"beta", s.beta}, {"gamma", s.gamma}};
}

AngleSchedule schedule_from_json(const nlohmann::json &j) {
    try {
        return AngleSchedule(j.at("beta").get<std::vector<double>>(), j.at("gamma").get<std::vector<double>>());
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("schedule: ") + e.what());
    }
}

AngleSchedule linear_qaa(std::size_t p, double delta) {
    if (p == 0) {
        throw InvalidInput("QAA depth must be at least 1");
    }
    if (!std::isfinite(delta) || delta <= 0.0) {
        throw InvalidInput("QAA time step must be finite and positive");
    }
    AngleSchedule s;
    s.beta.resize(p);
    s.gamma.resize(p);
    const double depth = static_cast<double>(p);
    for (std::size_t k = 1; k <= p; ++k) {
        const double frac = static_cast<double>(k) / depth;
        s.gamma[k - 1] = delta * frac;
        s.beta[k - 1] = delta - s.gamma[k - 1];
    }
    return s;
}

AngleSchedule qaa_circuit_schedule(const QaaConfig &cfg) {
    AngleSchedule s = linear_qaa(cfg);
    for (double &b : s.beta) {
        b = -b;
    }
    return s;
}

namespace {

std::vector<double> interp(const std::vector<double> &theta) {
    const std::size_t p = theta.size();
    const double depth = static_cast<double>(p);
    auto at = [&](std::size_t k) { return (k == 0 || k == p + 1) ? 0.0 : theta[k - 1]; };
    std::vector<double> out(p + 1);
    for (std::size_t k = 1; k <= p + 1; ++k) {
        out[k - 1] = (static_cast<double>(k - 1) / depth) * at(k - 1) +
                     (static_cast<double>(p - k + 1) / depth) * at(k);
    }
    return out;
}

}  // namespace

AngleSchedule interp_extend(const AngleSchedule &s) {
    if (s.depth() == 0) {
        throw InvalidInput("INTERP needs a schedule of depth at least 1");
    }
    return AngleSchedule(interp(s.beta), interp(s.gamma));
}

AngleSchedule append_zero_layer(const AngleSchedule &s) {
    AngleSchedule out = s;
    out.beta.push_back(0.0);
    out.gamma.push_back(0.0);
    return out;
}

std::vector<AngleSchedule> walker_cloud(const AngleSchedule &center, double rho, std::size_t m,
                                        std::uint64_t seed) {
    if (m == 0) {
        throw InvalidInput("walker count must be at least 1");
    }
    if (!std::isfinite(rho) || rho < 0.0) {
        throw InvalidInput("walker radius must be finite and non-negative");
    }
    std::vector<AngleSchedule> cloud(m, center);
    const Rng root(seed);
    for (std::size_t w = 1; w < m; ++w) {
        Rng rng = root.substream(w);
        for (auto *angles : {&cloud[w].beta, &cloud[w].gamma}) {
            for (double &a : *angles) {
                a += rho * (2.0 * rng.uniform() - 1.0);
            }
        }
    }
    return cloud;
}

}  // namespace antq
