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

#ifndef ANTQ_GEOMETRY_H
#define ANTQ_GEOMETRY_H

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace antq {

/// Candidate antenna site: a coverage disk of radius r centered at (x, y).
struct Site {
    double x = 0.0;
    double y = 0.0;
    double r = 1.0;

    bool operator==(const Site &) const = default;
};

/// Ordered candidate sites. Site index i is qubit index i.
struct SiteSet {
    std::vector<Site> sites;
    std::string label;

    std::size_t size() const { return sites.size(); }
    /// First `n` sites, same label suffixed with the size.
    SiteSet prefix(std::size_t n) const;

    bool operator==(const SiteSet &) const = default;
};

struct BoundingBox {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 1.0;
    double y1 = 1.0;
};

void validate_site(const Site &s);

double circle_area(double r);

/// Area of the intersection of the two coverage disks.
double lens_area(const Site &a, const Site &b);

/// Uniform centers in `bbox`, radii uniform on (0, r_max]. Deterministic in `seed`.
SiteSet generate_instance(std::size_t n, const BoundingBox &bbox, double r_max, std::uint64_t seed);

nlohmann::json sites_to_json(const SiteSet &s);
/// Accepts `{"label": ..., "sites": [{"x","y","r"}, ...]}`; throws ParseError naming the bad record.
SiteSet sites_from_json(const nlohmann::json &j);

SiteSet load_sites(const std::filesystem::path &path);
void save_sites(const SiteSet &s, const std::filesystem::path &path);

}  // namespace antq

#endif
