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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <numeric>

#include "antq/errors.h"
#include "antq/geometry.h"
#include "antq/rng.h"
#include "oracles.h"

namespace antq {
namespace {

constexpr double kPi = std::numbers::pi;

SiteSet two_sites(double d) { return SiteSet{{{0, 0, 1}, {d, 0, 1}}, "pair"}; }

TEST(BuildIsing, DisjointPair) {
    const IsingInstance inst = build_ising(two_sites(5.0));
    EXPECT_EQ(inst.J(0, 1), 0.0);
    EXPECT_EQ(inst.J(1, 0), 0.0);
    EXPECT_DOUBLE_EQ(inst.A()[0], kPi);
    EXPECT_DOUBLE_EQ(inst.A()[1], kPi);
    EXPECT_EQ(inst.xi(), 0.25);
    EXPECT_EQ(inst.n_t(), 1u);
    EXPECT_EQ(inst.delta_n_t(), 0);
}

TEST(BuildIsing, CoincidentPair) { EXPECT_DOUBLE_EQ(build_ising(two_sites(0.0)).J(0, 1), kPi); }

TEST(BuildIsing, DefaultTargetCount) {
    const SiteSet s = generate_instance(7, {0, 0, 1, 1}, 0.3, 1);
    const IsingInstance inst = build_ising(s, 0.25, 1.0);
    EXPECT_EQ(inst.n_t(), 3u);
    EXPECT_EQ(inst.delta_n_t(), 1);
    EXPECT_EQ(build_ising(s, 0.25, 1.0, 5).delta_n_t(), -3);
}

TEST(IsingInstance, RejectsBrokenInvariants) {
    const std::vector<double> J{0, 1, 1, 0}, A{1, 1};
    EXPECT_NO_THROW(IsingInstance(J, A, 0.25, 0.0, 1));
    EXPECT_THROW(IsingInstance({0, 1, 2, 0}, A, 0.25, 0.0, 1), InvalidInput);
    EXPECT_THROW(IsingInstance({1, 1, 1, 0}, A, 0.25, 0.0, 1), InvalidInput);
    EXPECT_THROW(IsingInstance({0, -1, -1, 0}, A, 0.25, 0.0, 1), InvalidInput);
    EXPECT_THROW(IsingInstance(J, {1, 0}, 0.25, 0.0, 1), InvalidInput);
    EXPECT_THROW(IsingInstance(J, A, -0.1, 0.0, 1), InvalidInput);
    EXPECT_THROW(IsingInstance(J, A, 0.25, -1.0, 1), InvalidInput);
    EXPECT_THROW(IsingInstance(J, A, 0.25, 0.0, 3), InvalidInput);
    EXPECT_THROW(IsingInstance({0, 1, 1}, A, 0.25, 0.0, 1), InvalidInput);
}

TEST(Cost, DisjointPairAllActive) {
    const IsingInstance inst = build_ising(two_sites(5.0));
    EXPECT_DOUBLE_EQ(cost(inst, SpinString::parse("11")), -kPi / 2.0);
}

TEST(Cost, CoincidentPairOpposite) {
    const IsingInstance inst = build_ising(two_sites(0.0));
    EXPECT_DOUBLE_EQ(cost(inst, SpinString::parse("10")), -2.0 * kPi);
}

TEST(Cost, LengthMismatch) {
    const IsingInstance inst = build_ising(two_sites(1.0));
    EXPECT_THROW(cost(inst, SpinString::parse("101")), InvalidInput);
}

TEST(Cost, MatchesTermOracle) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const SiteSet s = generate_instance(4, {0, 0, 1, 1}, 0.6, seed);
        for (double lambda : {0.0, 1.0, 2.5}) {
            const IsingInstance inst = build_ising(s, 0.25, lambda);
            for (std::uint64_t x = 0; x < 16; ++x) {
                const double want = oracle::term_cost(inst, x);
                EXPECT_NEAR(cost(inst, x), want, 1e-12 * std::max(1.0, std::abs(want)));
                EXPECT_EQ(cost(inst, x), cost(inst, SpinString::from_index(x, 4)));
            }
        }
    }
}

TEST(ReducedCouplings, PenaltyOff) {
    const IsingInstance inst = build_ising(generate_instance(5, {0, 0, 1, 1}, 0.5, 3));
    const ReducedCouplings rc = reduced_couplings(inst);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(rc.A[i], -0.25 * inst.A()[i]);
        for (std::size_t j = 0; j < 5; ++j) {
            EXPECT_EQ(rc.coupling(i, j), inst.J(i, j));
        }
    }
}

TEST(ReducedCouplings, BalancedTarget) {
    const IsingInstance inst = build_ising(two_sites(1.0), 0.25, 1.0, 1);
    const ReducedCouplings rc = reduced_couplings(inst);
    EXPECT_EQ(rc.A[0], -0.25 * inst.A()[0]);
    EXPECT_EQ(rc.coupling(0, 1), inst.J(0, 1) + 1.0);
    EXPECT_EQ(rc.coupling(0, 0), 0.0);
}

TEST(ReducedCouplings, ExhaustiveEquivalence) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t n = 2 + seed % 7;
        for (double lambda : {0.0, 1.0}) {
            const IsingInstance inst = oracle::random_instance(n, lambda, seed);
            const ReducedCouplings rc = reduced_couplings(inst);
            for (std::uint64_t x = 0; x < (1u << n); ++x) {
                const double c = cost(inst, x);
                EXPECT_NEAR(reduced_cost(rc, x), c, 1e-12 * std::max(1.0, std::abs(c)));
            }
        }
    }
}

TEST(ReducedCouplings, ResidualsKeepFormsEquivalent) {
    // Non-dyadic xi and lambda: the coupling sums and field products round in double.
    const IsingInstance base = oracle::random_instance(9, 0.0, 77);
    const IsingInstance inst(std::vector<double>(base.J().begin(), base.J().end()),
                             std::vector<double>(base.A().begin(), base.A().end()), 0.3, 0.7, 2);
    const ReducedCouplings rc = reduced_couplings(inst);
    double worst = 0.0;
    for (std::uint64_t x = 0; x < 512; ++x) {
        const double a = cost(inst, x), b = reduced_cost(rc, x);
        worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), std::abs(b)));
    }
    EXPECT_LE(worst, 1e-13);
}

TEST(Cost, InvariantUnderRelabeling) {
    const SiteSet s = generate_instance(6, {0, 0, 1, 1}, 0.5, 8);
    std::vector<std::size_t> perm{3, 0, 5, 1, 4, 2};
    SiteSet t = s;
    for (std::size_t i = 0; i < 6; ++i) {
        t.sites[i] = s.sites[perm[i]];
    }
    for (double lambda : {0.0, 1.0}) {
        const IsingInstance a = build_ising(s, 0.25, lambda), b = build_ising(t, 0.25, lambda);
        for (std::uint64_t x = 0; x < 64; ++x) {
            std::uint64_t y = 0;
            for (std::size_t i = 0; i < 6; ++i) {
                y |= ((x >> perm[i]) & 1) << i;
            }
            EXPECT_NEAR(cost(a, x), cost(b, y), 1e-12);
        }
    }
}

TEST(SpinString, ParseAndIndex) {
    const SpinString z = SpinString::parse("0110");
    EXPECT_EQ(z.index(), 0b0110u);
    EXPECT_EQ(z.spin(0), -1);
    EXPECT_EQ(z.spin(1), 1);
    EXPECT_EQ(z.str(), "0110");
    EXPECT_EQ(SpinString::from_index(0b1101, 4).str(), "1011");
    EXPECT_EQ(bitstring(1, 3), "100");
    EXPECT_THROW(SpinString::parse("01a"), InvalidInput);
}

TEST(BruteForce, SingleSite) {
    const IsingInstance inst = build_ising(SiteSet{{{0, 0, 0.8}}, "one"});
    const Spectrum s = brute_force(inst);
    EXPECT_EQ(s.ground_strings, std::vector<std::uint64_t>{1});
    EXPECT_DOUBLE_EQ(s.h_min, -kPi * 0.64 / 4.0);
    EXPECT_DOUBLE_EQ(s.gap, 2.0 * kPi * 0.64 / 4.0);
}

TEST(BruteForce, DisjointCoverAll) {
    const Spectrum s = brute_force(build_ising(two_sites(5.0)));
    EXPECT_EQ(s.ground_strings, std::vector<std::uint64_t>{3});
}

TEST(BruteForce, DisjointArgminIsAllActive) {
    SiteSet s;
    for (int i = 0; i < 8; ++i) {
        s.sites.push_back({3.0 * i, 0.0, 0.2 + 0.1 * i});
    }
    EXPECT_EQ(brute_force(build_ising(s)).ground_strings, std::vector<std::uint64_t>{255});
}

TEST(BruteForce, MatchesNaiveEnumeration) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const IsingInstance inst = oracle::random_instance(9, seed % 2 ? 1.0 : 0.0, seed);
        std::vector<double> all;
        for (std::uint64_t x = 0; x < 512; ++x) {
            all.push_back(oracle::term_cost(inst, x));
        }
        const Spectrum s = brute_force(inst);
        std::vector<double> sorted = all;
        std::sort(sorted.begin(), sorted.end());
        EXPECT_NEAR(s.h_min, sorted.front(), 1e-12);
        EXPECT_NEAR(s.h_max, sorted.back(), 1e-12);
        for (std::uint64_t g : s.ground_strings) {
            EXPECT_EQ(cost(inst, g), s.h_min);
        }
        // The term-level oracle differs from cost() by a few ulps; group its lowest bucket accordingly.
        const auto next =
            std::find_if(sorted.begin(), sorted.end(), [&](double v) { return v > sorted.front() + 1e-9; });
        EXPECT_NEAR(s.gap, next == sorted.end() ? 0.0 : *next - s.h_min, 1e-12);
        EXPECT_GT(s.gap, 0.0);
    }
}

TEST(BruteForce, KeepsTies) {
    // Antiferromagnetic pair without fields: both anti-aligned strings tie.
    const IsingInstance inst({0, 2, 2, 0}, {1, 1}, 0.0, 0.0, 1);
    const Spectrum s = brute_force(inst);
    EXPECT_EQ(s.ground_strings, (std::vector<std::uint64_t>{1, 2}));
}

TEST(BruteForce, Cap) {
    const IsingInstance inst = oracle::random_instance(6, 0.0, 1);
    EXPECT_THROW(brute_force(inst, 5), ResourceLimit);
    EXPECT_NO_THROW(brute_force(inst, 6));
}

TEST(SpectrumOf, Values) {
    const std::vector<double> v{3.0, -1.0, 2.0, -1.0};
    const Spectrum s = spectrum_of(v);
    EXPECT_EQ(s.h_min, -1.0);
    EXPECT_EQ(s.ground_strings, (std::vector<std::uint64_t>{1, 3}));
    EXPECT_EQ(s.gap, 3.0);
    EXPECT_EQ(s.h_max, 3.0);
}

TEST(Connectivity, AllDisjoint) {
    SiteSet s;
    for (int i = 0; i < 5; ++i) {
        s.sites.push_back({10.0 * i, 0.0, 1.0});
    }
    const auto h = connectivity_histogram(build_ising(s));
    EXPECT_EQ(h, (std::map<std::size_t, std::size_t>{{0, 5}}));
    EXPECT_EQ(mean_degree(h), 0.0);
}

TEST(Connectivity, PenaltyConnectsEverything) {
    const IsingInstance inst = build_ising(generate_instance(9, {0, 0, 5, 5}, 0.3, 2), 0.25, 1.0);
    EXPECT_EQ(connectivity_histogram(inst), (std::map<std::size_t, std::size_t>{{8, 9}}));
}

TEST(Connectivity, CountsSumToN) {
    const IsingInstance inst = build_ising(generate_instance(20, {0, 0, 2, 2}, 0.7, 3));
    const auto h = connectivity_histogram(inst);
    std::size_t total = 0, degree_sum = 0, edges = 0;
    for (auto [d, c] : h) {
        total += c;
        degree_sum += d * c;
    }
    for (std::size_t i = 0; i < 20; ++i) {
        for (std::size_t j = i + 1; j < 20; ++j) {
            edges += inst.J(i, j) != 0.0;
        }
    }
    EXPECT_EQ(total, 20u);
    EXPECT_EQ(degree_sum, 2 * edges);
    EXPECT_DOUBLE_EQ(mean_degree(h), 2.0 * edges / 20.0);
}

TEST(InstanceFile, SitesForm) {
    const auto spec = instance_spec_from_json(nlohmann::json::parse(
        R"({"xi":0.5,"lambda":1,"n_t":1,"sites":[{"x":0,"y":0,"r":1},{"x":1,"y":0,"r":1},{"x":9,"y":0,"r":1}]})"));
    const IsingInstance full = spec.build();
    EXPECT_EQ(full.n(), 3u);
    EXPECT_EQ(full.n_t(), 1u);
    EXPECT_EQ(full.xi(), 0.5);
    const IsingInstance two = spec.build(2);
    EXPECT_EQ(two.n(), 2u);
    EXPECT_EQ(two.n_t(), 1u);
    EXPECT_DOUBLE_EQ(two.J(0, 1), lens_area({0, 0, 1}, {1, 0, 1}));
}

TEST(InstanceFile, MatrixFormRoundTrip) {
    const IsingInstance inst = oracle::random_instance(5, 1.0, 4);
    const IsingInstance back = instance_spec_from_json(instance_to_json(inst)).build();
    EXPECT_EQ(std::vector<double>(back.J().begin(), back.J().end()),
              std::vector<double>(inst.J().begin(), inst.J().end()));
    EXPECT_EQ(std::vector<double>(back.A().begin(), back.A().end()),
              std::vector<double>(inst.A().begin(), inst.A().end()));
    EXPECT_EQ(back.lambda(), inst.lambda());
    EXPECT_EQ(back.n_t(), inst.n_t());
}

TEST(InstanceFile, Malformed) {
    using nlohmann::json;
    EXPECT_THROW(instance_spec_from_json(json::parse("[]")), ParseError);
    EXPECT_THROW(instance_spec_from_json(json::parse(R"({"xi":"a","sites":[{"x":0,"y":0,"r":1}]})")), ParseError);
    EXPECT_THROW(instance_spec_from_json(json::parse(R"({"J":[[0]],"A":[]})")), ParseError);
    EXPECT_THROW(instance_spec_from_json(json::parse(R"({"J":[[0,1]],"A":[1]})")), ParseError);
    EXPECT_THROW(instance_spec_from_json(json::parse(R"({"lambda":1})")), ParseError);
    EXPECT_THROW(load_instance_spec("/nonexistent/instance.json"), ParseError);
}

}  // namespace
}  // namespace antq
