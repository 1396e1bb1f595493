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

#include "antq/geometry.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "antq/errors.h"
#include "antq/rng.h"

namespace antq {

SiteSet SiteSet::prefix(std::size_t n) const {
    if (n == 0 || n > sites.size()) {
        throw InvalidInput("prefix size " + std::to_string(n) + " outside [1, " +
                           std::to_string(sites.size()) + "]");
    }
    SiteSet out;
    out.sites.assign(sites.begin(), sites.begin() + static_cast<std::ptrdiff_t>(n));
    out.label = label + "[:" + std::to_string(n) + "]";
    return out;
}

void validate_site(const Site &s) {
    if (!std::isfinite(s.x) || !std::isfinite(s.y)) {
        throw InvalidInput("site coordinates must be finite");
    }
    if (!std::isfinite(s.r) || s.r <= 0.0) {
        throw InvalidInput("site radius must be finite and positive, got " + std::to_string(s.r));
    }
}

double circle_area(double r) {
    if (!std::isfinite(r) || r <= 0.0) {
        throw InvalidInput("radius must be finite and positive, got " + std::to_string(r));
    }
    return std::numbers::pi * r * r;
}

double lens_area(const Site &a, const Site &b) {
    validate_site(a);
    validate_site(b);
    // Fixed roles make the result bit-for-bit symmetric.
    const double big = std::max(a.r, b.r);
    const double small = std::min(a.r, b.r);
    const double d = std::hypot(a.x - b.x, a.y - b.y);

    if (d >= big + small) {
        return 0.0;
    }
    if (d <= big - small) {
        return std::numbers::pi * small * small;
    }

    auto clamped_acos = [](double c) { return std::acos(std::clamp(c, -1.0, 1.0)); };
    const double d2 = d * d;
    const double angle_big = clamped_acos((d2 + big * big - small * small) / (2.0 * d * big));
    const double angle_small = clamped_acos((d2 + small * small - big * big) / (2.0 * d * small));
    const double kite = (-d + big + small) * (d + big - small) * (d - big + small) * (d + big + small);
    const double area =
        big * big * angle_big + small * small * angle_small - 0.5 * std::sqrt(std::max(kite, 0.0));
    return std::clamp(area, 0.0, std::numbers::pi * small * small);
}

SiteSet generate_instance(std::size_t n, const BoundingBox &bbox, double r_max, std::uint64_t seed) {
    if (n == 0) {
        throw InvalidInput("site count must be at least 1");
    }
    if (!(std::isfinite(bbox.x0) && std::isfinite(bbox.x1) && std::isfinite(bbox.y0) &&
          std::isfinite(bbox.y1)) ||
        !(bbox.x1 > bbox.x0) || !(bbox.y1 > bbox.y0)) {
        throw InvalidInput("bounding box is degenerate");
    }
    if (!std::isfinite(r_max) || r_max <= 0.0) {
        throw InvalidInput("r_max must be finite and positive");
    }

    Rng rng(seed);
    SiteSet out;
    out.label = "generated n=" + std::to_string(n) + " seed=" + std::to_string(seed);
    out.sites.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Site s;
        s.x = bbox.x0 + rng.uniform() * (bbox.x1 - bbox.x0);
        s.y = bbox.y0 + rng.uniform() * (bbox.y1 - bbox.y0);
        s.r = r_max * (1.0 - rng.uniform());
        // Rounding can push x0 + u * w up to x1; keep the half-open box.
        s.x = std::min(s.x, std::nextafter(bbox.x1, bbox.x0));
        s.y = std::min(s.y, std::nextafter(bbox.y1, bbox.y0));
        out.sites.push_back(s);
    }
    return out;
}

nlohmann::json sites_to_json(const SiteSet &s) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &site : s.sites) {
        arr.push_back({{"x", site.x}, {"y", site.y}, {"r", site.r}});
    }
    return {{"label", s.label}, {"sites", std::move(arr)}};
}

SiteSet sites_from_json(const nlohmann::json &j) {
    if (!j.is_object() || !j.contains("sites") || !j["sites"].is_array()) {
        throw ParseError("site file: expected an object with a \"sites\" array");
    }
    SiteSet out;
    if (j.contains("label")) {
        if (!j["label"].is_string()) {
            throw ParseError("site file: \"label\" must be a string");
        }
        out.label = j["label"].get<std::string>();
    }
    const auto &arr = j["sites"];
    if (arr.empty()) {
        throw ParseError("site file: \"sites\" is empty");
    }
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto &rec = arr[i];
        const std::string where = "site file: sites[" + std::to_string(i) + "]";
        if (!rec.is_object()) {
            throw ParseError(where + " is not an object");
        }
        Site s;
        for (auto [key, field] : {std::pair{"x", &s.x}, std::pair{"y", &s.y}, std::pair{"r", &s.r}}) {
            if (!rec.contains(key) || !rec[key].is_number()) {
                throw ParseError(where + ": missing or non-numeric \"" + key + "\"");
            }
            *field = rec[key].get<double>();
        }
        try {
            validate_site(s);
        } catch (const InvalidInput &e) {
            throw ParseError(where + ": " + e.what());
        }
        out.sites.push_back(s);
    }
    return out;
}

SiteSet load_sites(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open site file " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return sites_from_json(j);
}

void save_sites(const SiteSet &s, const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out) {
        throw InvalidInput("cannot write site file " + path.string());
    }
    out << sites_to_json(s).dump(2) << '\n';
}

}  // namespace antq
