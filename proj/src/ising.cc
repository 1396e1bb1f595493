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

#include "antq/ising.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "antq/errors.h"

namespace antq {

IsingInstance::IsingInstance(std::vector<double> J, std::vector<double> A, double xi, double lambda,
                             std::size_t n_t)
    : J_(std::move(J)), A_(std::move(A)), xi_(xi), lambda_(lambda), n_t_(n_t) {
    const std::size_t n = A_.size();
    if (n == 0) {
        throw InvalidInput("instance must have at least one site");
    }
    if (J_.size() != n * n) {
        throw InvalidInput("J must be " + std::to_string(n) + "x" + std::to_string(n));
    }
    if (!std::isfinite(xi_) || xi_ < 0.0) {
        throw InvalidInput("xi must be finite and non-negative");
    }
    if (!std::isfinite(lambda_) || lambda_ < 0.0) {
        throw InvalidInput("lambda must be finite and non-negative");
    }
    if (n_t_ > n) {
        throw InvalidInput("n_t must not exceed n");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(A_[i]) || A_[i] <= 0.0) {
            throw InvalidInput("A[" + std::to_string(i) + "] must be finite and positive");
        }
        if (J_[i * n + i] != 0.0) {
            throw InvalidInput("J must have a zero diagonal");
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double v = J_[i * n + j];
            if (!std::isfinite(v) || v < 0.0) {
                throw InvalidInput("J entries must be finite and non-negative");
            }
            if (v != J_[j * n + i]) {
                throw InvalidInput("J must be symmetric");
            }
        }
    }
}

IsingInstance build_ising(const SiteSet &sites, double xi, double lambda,
                          std::optional<std::size_t> n_t) {
    const std::size_t n = sites.size();
    if (n == 0) {
        throw InvalidInput("site set is empty");
    }
    std::vector<double> J(n * n, 0.0);
    std::vector<double> A(n);
    for (std::size_t i = 0; i < n; ++i) {
        A[i] = circle_area(sites.sites[i].r);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double overlap = lens_area(sites.sites[i], sites.sites[j]);
            J[i * n + j] = overlap;
            J[j * n + i] = overlap;
        }
    }
    return IsingInstance(std::move(J), std::move(A), xi, lambda, n_t.value_or(n / 2));
}

SpinString SpinString::from_index(std::uint64_t x, std::size_t n) {
    SpinString z;
    z.bits.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        z.bits[i] = static_cast<std::uint8_t>((x >> i) & 1u);
    }
    return z;
}

SpinString SpinString::parse(const std::string &s) {
    SpinString z;
    z.bits.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1') {
            throw InvalidInput("bitstring may only contain 0 and 1: \"" + s + "\"");
        }
        z.bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return z;
}

std::uint64_t SpinString::index() const {
    if (bits.size() > 64) {
        throw InvalidInput("bitstring longer than 64 sites");
    }
    std::uint64_t x = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        x |= static_cast<std::uint64_t>(bits[i] & 1u) << i;
    }
    return x;
}

std::string SpinString::str() const {
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i) {
        s[i] = bits[i] ? '1' : '0';
    }
    return s;
}

std::string bitstring(std::uint64_t x, std::size_t n) {
    std::string s(n, '0');
    for (std::size_t i = 0; i < n; ++i) {
        if ((x >> i) & 1u) {
            s[i] = '1';
        }
    }
    return s;
}

namespace {

// Neumaier-compensated sum. Costs near zero are differences of O(n^2) terms, so
// plain accumulation loses several ulps relative to the result.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        comp_ += std::abs(sum_) >= std::abs(v) ? (sum_ - t) + v : (v - t) + sum_;
        sum_ = t;
    }
    /// Adds a * b exactly (product split with fma).
    void add_product(double a, double b) {
        const double prod = a * b;
        add(prod);
        add(std::fma(a, b, -prod));
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace

double cost(const IsingInstance &inst, std::uint64_t x) {
    const std::size_t n = inst.n();
    auto spin = [x](std::size_t i) { return ((x >> i) & 1u) ? 1.0 : -1.0; };

    CompensatedSum total;
    double magnetization = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double zi = spin(i);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                total.add(inst.J(i, j) * zi * spin(j));
            }
        }
        total.add_product(-inst.xi(), inst.A()[i] * zi);
        magnetization += zi;
    }

    // sum_{i != j} z_i z_j = M^2 - n, exact in double for n < 2^26.
    const double pairs = magnetization * magnetization - static_cast<double>(n);
    total.add_product(inst.lambda(), pairs);
    total.add_product(inst.lambda(), static_cast<double>(inst.delta_n_t()) * magnetization);
    return total.value();
}

double cost(const IsingInstance &inst, const SpinString &z) {
    if (z.size() != inst.n()) {
        throw InvalidInput("spin string has length " + std::to_string(z.size()) +
                           ", instance has " + std::to_string(inst.n()) + " sites");
    }
    return cost(inst, z.index());
}

ReducedCouplings reduced_couplings(const IsingInstance &inst) {
    // Error-free transforms: hi + lo is the exact sum / product.
    auto two_sum = [](double a, double b, double &lo) {
        const double hi = a + b;
        const double bb = hi - a;
        lo = (a - (hi - bb)) + (b - bb);
        return hi;
    };
    const std::size_t n = inst.n();
    ReducedCouplings rc;
    rc.n = n;
    rc.J.assign(n * n, 0.0);
    rc.J_lo.assign(n * n, 0.0);
    rc.A.resize(n);
    rc.A_lo.resize(n);
    const double shift = inst.lambda() * static_cast<double>(inst.delta_n_t());
    const double shift_lo = std::fma(inst.lambda(), static_cast<double>(inst.delta_n_t()), -shift);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) {
                rc.J[i * n + j] = two_sum(inst.J(i, j), inst.lambda(), rc.J_lo[i * n + j]);
            }
        }
        const double field = inst.xi() * inst.A()[i];
        const double field_lo = std::fma(inst.xi(), inst.A()[i], -field);
        double sum_lo = 0.0;
        rc.A[i] = two_sum(shift, -field, sum_lo);
        rc.A_lo[i] = sum_lo + shift_lo - field_lo;
    }
    return rc;
}

double reduced_cost(const ReducedCouplings &rc, std::uint64_t x) {
    CompensatedSum total;
    for (std::size_t i = 0; i < rc.n; ++i) {
        const double zi = ((x >> i) & 1u) ? 1.0 : -1.0;
        for (std::size_t j = 0; j < rc.n; ++j) {
            if (j != i) {
                const double zj = ((x >> j) & 1u) ? 1.0 : -1.0;
                total.add(rc.J[i * rc.n + j] * zi * zj);
                if (!rc.J_lo.empty()) {
                    total.add(rc.J_lo[i * rc.n + j] * zi * zj);
                }
            }
        }
        total.add(rc.A[i] * zi);
        if (!rc.A_lo.empty()) {
            total.add(rc.A_lo[i] * zi);
        }
    }
    return total.value();
}

namespace {

struct PartialSpectrum {
    double min = std::numeric_limits<double>::infinity();
    double second = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    std::vector<std::uint64_t> ties;

    void add(std::uint64_t x, double v) {
        max = std::max(max, v);
        if (v < min) {
            second = min;
            min = v;
            ties.assign(1, x);
        } else if (v == min) {
            ties.push_back(x);
        } else if (v < second) {
            second = v;
        }
    }

    // `later` covers strictly larger indices, so ties stay ascending.
    void merge(const PartialSpectrum &later) {
        max = std::max(max, later.max);
        if (later.min < min) {
            second = std::min(min, later.second);
            min = later.min;
            ties = later.ties;
        } else if (later.min == min) {
            second = std::min(second, later.second);
            ties.insert(ties.end(), later.ties.begin(), later.ties.end());
        } else {
            second = std::min(second, later.min);
        }
    }
};

template <typename Eval>
Spectrum enumerate(std::uint64_t dim, Eval eval) {
    constexpr std::uint64_t kChunk = 1u << 14;
    const std::uint64_t chunks = (dim + kChunk - 1) / kChunk;
    std::vector<PartialSpectrum> parts(chunks);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
        const std::uint64_t lo = static_cast<std::uint64_t>(c) * kChunk;
        const std::uint64_t hi = std::min(dim, lo + kChunk);
        for (std::uint64_t x = lo; x < hi; ++x) {
            parts[c].add(x, eval(x));
        }
    }
    PartialSpectrum all = parts.front();
    for (std::size_t c = 1; c < parts.size(); ++c) {
        all.merge(parts[c]);
    }
    Spectrum s;
    s.h_min = all.min;
    s.h_max = all.max;
    s.ground_strings = std::move(all.ties);
    s.gap = std::isfinite(all.second) ? all.second - all.min : 0.0;
    return s;
}

}  // namespace

Spectrum brute_force(const IsingInstance &inst, std::size_t cap) {
    if (inst.n() > cap || inst.n() >= 63) {
        throw ResourceLimit("brute force limited to " + std::to_string(cap) + " sites, instance has " +
                            std::to_string(inst.n()));
    }
    return enumerate(std::uint64_t{1} << inst.n(), [&](std::uint64_t x) { return cost(inst, x); });
}

Spectrum spectrum_of(std::span<const double> values) {
    if (values.empty()) {
        throw InvalidInput("empty cost table");
    }
    return enumerate(values.size(), [&](std::uint64_t x) { return values[x]; });
}

std::map<std::size_t, std::size_t> connectivity_histogram(const IsingInstance &inst) {
    const auto rc = reduced_couplings(inst);
    std::map<std::size_t, std::size_t> hist;
    for (std::size_t i = 0; i < rc.n; ++i) {
        std::size_t degree = 0;
        for (std::size_t j = 0; j < rc.n; ++j) {
            if (j != i && rc.coupling(i, j) != 0.0) {
                ++degree;
            }
        }
        ++hist[degree];
    }
    return hist;
}

double mean_degree(const std::map<std::size_t, std::size_t> &hist) {
    double total = 0.0;
    double count = 0.0;
    for (auto [degree, sites] : hist) {
        total += static_cast<double>(degree * sites);
        count += static_cast<double>(sites);
    }
    return count > 0.0 ? total / count : 0.0;
}

IsingInstance InstanceSpec::build(std::optional<std::size_t> prefix) const {
    const std::size_t size = prefix.value_or(n);
    if (size == 0 || size > n) {
        throw InvalidInput("requested " + std::to_string(size) + " sites from an instance with " +
                           std::to_string(n));
    }
    const bool strict_prefix = size < n;
    const std::size_t target = (n_t && !strict_prefix) ? *n_t : size / 2;
    if (sites) {
        return build_ising(strict_prefix ? sites->prefix(size) : *sites, xi, lambda, target);
    }
    std::vector<double> sub_j(size * size);
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) {
            sub_j[i * size + j] = J[i * n + j];
        }
    }
    return IsingInstance(std::move(sub_j), std::vector<double>(A.begin(), A.begin() + size), xi, lambda,
                         target);
}

InstanceSpec instance_spec_from_json(const nlohmann::json &j) {
    if (!j.is_object()) {
        throw ParseError("instance file: expected a JSON object");
    }
    InstanceSpec spec;
    auto number = [&](const char *key, double fallback) {
        if (!j.contains(key)) {
            return fallback;
        }
        if (!j[key].is_number()) {
            throw ParseError(std::string("instance file: \"") + key + "\" must be a number");
        }
        return j[key].get<double>();
    };
    spec.xi = number("xi", kDefaultXi);
    spec.lambda = number("lambda", 0.0);
    if (j.contains("n_t")) {
        if (!j["n_t"].is_number_unsigned()) {
            throw ParseError("instance file: \"n_t\" must be a non-negative integer");
        }
        spec.n_t = j["n_t"].get<std::size_t>();
    }
    if (j.contains("label") && j["label"].is_string()) {
        spec.label = j["label"].get<std::string>();
    }

    if (j.contains("sites")) {
        spec.sites = sites_from_json(j);
        spec.n = spec.sites->size();
        if (spec.label.empty()) {
            spec.label = spec.sites->label;
        }
    } else if (j.contains("J") && j.contains("A")) {
        const auto &jm = j["J"];
        const auto &av = j["A"];
        if (!av.is_array() || av.empty()) {
            throw ParseError("instance file: \"A\" must be a non-empty array");
        }
        spec.n = av.size();
        for (std::size_t i = 0; i < spec.n; ++i) {
            if (!av[i].is_number()) {
                throw ParseError("instance file: A[" + std::to_string(i) + "] is not a number");
            }
            spec.A.push_back(av[i].get<double>());
        }
        if (!jm.is_array() || jm.size() != spec.n) {
            throw ParseError("instance file: \"J\" must have " + std::to_string(spec.n) + " rows");
        }
        for (std::size_t r = 0; r < spec.n; ++r) {
            if (!jm[r].is_array() || jm[r].size() != spec.n) {
                throw ParseError("instance file: J[" + std::to_string(r) + "] must have " +
                                 std::to_string(spec.n) + " entries");
            }
            for (std::size_t c = 0; c < spec.n; ++c) {
                if (!jm[r][c].is_number()) {
                    throw ParseError("instance file: J[" + std::to_string(r) + "][" + std::to_string(c) +
                                     "] is not a number");
                }
                spec.J.push_back(jm[r][c].get<double>());
            }
        }
    } else {
        throw ParseError("instance file: needs either \"sites\" or both \"J\" and \"A\"");
    }

    // Validate eagerly so malformed files fail at load time.
    try {
        (void)spec.build();
    } catch (const InvalidInput &e) {
        throw ParseError(std::string("instance file: ") + e.what());
    }
    return spec;
}

InstanceSpec load_instance_spec(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open instance file " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return instance_spec_from_json(j);
}

nlohmann::json instance_to_json(const IsingInstance &inst) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < inst.n(); ++i) {
        rows.push_back(std::vector<double>(inst.J().begin() + static_cast<std::ptrdiff_t>(i * inst.n()),
                                           inst.J().begin() + static_cast<std::ptrdiff_t>((i + 1) * inst.n())));
    }
    return {{"xi", inst.xi()},
            {"lambda", inst.lambda()},
            {"n_t", inst.n_t()},
            {"J", std::move(rows)},
            {"A", std::vector<double>(inst.A().begin(), inst.A().end())}};
}

}  // namespace antq
