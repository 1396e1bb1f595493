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

#ifndef ANTQ_CLI_H
#define ANTQ_CLI_H

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace antq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitResource = 3;
inline constexpr int kExitData = 4;

inline constexpr const char *kVersion = "antq 0.1.0";

/// Shortest round-trip decimal; "nan" for NaN.
std::string format_number(double v);

/// "a:b:step" (inclusive) or a comma list.
std::vector<double> parse_real_grid(const std::string &text, const char *field);
/// Comma list of non-negative integers.
std::vector<std::size_t> parse_size_list(const std::string &text, const char *field);

/// Lowercase hex SHA-256 of a byte string / file contents.
std::string sha256_hex(const std::string &bytes);
std::string file_sha256(const std::filesystem::path &path);

/// One qaa or qaoa batch: every instance file x size x repetition x depth.
struct ExperimentConfig {
    std::string algo;  ///< "qaa" or "qaoa"
    std::vector<std::string> instances;
    /// Prefix sizes; unset means the full instance.
    std::optional<std::vector<std::size_t>> n_list;
    std::optional<double> lambda;
    std::optional<double> xi;
    std::vector<std::size_t> p_list;  ///< qaa depths
    std::size_t p_max = 1;            ///< qaoa ladder depth
    double delta = 0.5;
    std::uint64_t n_meas = 0;  ///< 0 = exact statevector metrics
    std::size_t repetitions = 1;
    std::size_t walkers = 1;
    double rho = 0.1;
    std::size_t iters = 50;
    std::uint64_t seed = 0;
    std::size_t max_qubits = 26;
    std::string out;
    std::string cp_out;
    std::string hist_out;
    /// Exponential fit of 1/p_gs against n per (lambda, p).
    std::string fit_out;

    /// Throws UsageError naming the offending field.
    void validate() const;
    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json &j);
};

struct RunOutputs {
    std::string run_id;
    std::filesystem::path manifest;
    std::vector<std::string> files;
    std::size_t runs = 0;
    std::vector<std::string> errors;  ///< one entry per failed (instance, n, repetition)
};

/// Runs the batch and writes the metrics CSV, optional CP / histogram CSVs and
/// `<out>.manifest.json`.
RunOutputs run_experiment(const ExperimentConfig &cfg);

/// Per-(n, lambda, algo, p) aggregates of the metrics CSV listed in the manifest
/// with this run_id. Throws NotFound when no manifest in `dir` matches.
std::string report(const std::string &run_id, const std::filesystem::path &dir);

/// Full command line entry point; returns the process exit code.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace antq::cli

#endif
