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

#include "antq/cli.h"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <variant>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "antq/errors.h"
#include "antq/geometry.h"
#include "antq/ising.h"
#include "antq/metrics.h"
#include "antq/optimizer.h"
#include "antq/rng.h"
#include "antq/schedules.h"
#include "antq/statevector.h"

namespace antq::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        parts.push_back(cur);
    }
    if (!s.empty() && s.back() == sep) {
        parts.emplace_back();
    }
    return parts;
}

double parse_real(const std::string &text, const char *field) {
    const std::string t = trim(text);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
        throw UsageError(std::string(field) + ": not a number: '" + text + "'");
    }
    return v;
}

std::string fmt_size(std::size_t v) { return std::to_string(v); }

void write_text(const fs::path &path, const std::string &text) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw NotFound("cannot write " + path.string());
    }
    f << text;
    if (!f) {
        throw NotFound("write failed: " + path.string());
    }
}

/// Lines of a CSV file written by one of the subcommands.
class CsvWriter {
public:
    explicit CsvWriter(std::string header) : text_(std::move(header) + "\n") {}

    template <typename... Fields>
    void row(const Fields &...fields) {
        std::size_t k = 0;
        ((text_ += (k++ ? "," : ""), text_ += cell(fields)), ...);
        text_ += '\n';
    }
    const std::string &text() const { return text_; }

private:
    static std::string cell(const std::string &s) { return s; }
    static std::string cell(const char *s) { return s; }
    static std::string cell(double v) { return format_number(v); }
    static std::string cell(std::size_t v) { return std::to_string(v); }

    std::string text_;
};

fs::path manifest_path(const fs::path &out) { return fs::path(out.string() + ".manifest.json"); }

json instance_records(const std::vector<std::string> &paths) {
    json arr = json::array();
    for (const auto &p : paths) {
        arr.push_back({{"path", p}, {"sha256", file_sha256(p)}});
    }
    return arr;
}

std::string make_run_id(const std::string &command, const json &config, const json &instances) {
    json core = {{"command", command}, {"config", config}, {"instances", instances}};
    for (auto &rec : core["instances"]) {
        rec.erase("path");
    }
    return sha256_hex(core.dump()).substr(0, 16);
}

int thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void write_manifest(const fs::path &out, json manifest, const std::vector<fs::path> &outputs, double wall) {
    json files = json::array();
    for (const auto &o : outputs) {
        files.push_back(o.filename().string());
    }
    manifest["outputs"] = files;
    manifest["version"] = kVersion;
    manifest["threads"] = thread_count();
    manifest["wall_time_s"] = wall;
    write_text(manifest_path(out), manifest.dump(2) + "\n");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Instance at one size with its cost diagonal and exact spectrum.
struct Problem {
    IsingInstance inst;
    CostTable table;
    Spectrum spectrum;
};

InstanceSpec override_spec(InstanceSpec spec, std::optional<double> lambda, std::optional<double> xi) {
    if (lambda) {
        spec.lambda = *lambda;
    }
    if (xi) {
        spec.xi = *xi;
    }
    return spec;
}

Problem prepare(const InstanceSpec &spec, std::optional<std::size_t> n, std::size_t max_qubits) {
    const std::size_t size = n.value_or(spec.n);
    if (size > max_qubits) {
        throw ResourceLimit("n = " + std::to_string(size) + " exceeds the " + std::to_string(max_qubits) +
                            "-qubit cap");
    }
    IsingInstance inst = spec.build(n);
    CostTable table = CostTable::build(inst, max_qubits);
    Spectrum spectrum = table.precomputed() ? spectrum_of(table.values()) : brute_force(inst, max_qubits);
    return {std::move(inst), std::move(table), std::move(spectrum)};
}

std::vector<double> cp_thresholds() {
    std::vector<double> t;
    for (int k = 0; k <= 100; ++k) {
        t.push_back(k / 100.0);
    }
    return t;
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (v == 0.0) {
        v = 0.0;  // drop the sign of -0
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::vector<double> parse_real_grid(const std::string &text, const char *field) {
    const std::string t = trim(text);
    if (t.empty()) {
        throw UsageError(std::string(field) + ": empty");
    }
    std::vector<double> out;
    if (t.find(':') != std::string::npos) {
        auto parts = split(t, ':');
        if (parts.size() != 3) {
            throw UsageError(std::string(field) + ": expected start:stop:step");
        }
        const double a = parse_real(parts[0], field);
        const double b = parse_real(parts[1], field);
        const double step = parse_real(parts[2], field);
        if (step <= 0.0 || b < a) {
            throw UsageError(std::string(field) + ": need step > 0 and stop >= start");
        }
        const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
        if (count > 1000000) {
            throw UsageError(std::string(field) + ": grid too large");
        }
        for (std::size_t k = 0; k < count; ++k) {
            // Snap to 9 decimals so 0.1:3:0.1 yields 0.3, not 0.30000000000000004.
            out.push_back(std::round((a + static_cast<double>(k) * step) * 1e9) / 1e9);
        }
        return out;
    }
    for (const auto &part : split(t, ',')) {
        out.push_back(parse_real(part, field));
    }
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string &text, const char *field) {
    const std::string t = trim(text);
    if (t.empty()) {
        throw UsageError(std::string(field) + ": empty");
    }
    std::vector<std::size_t> out;
    for (const auto &raw : split(t, ',')) {
        const std::string part = trim(raw);
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (part.empty() || ec != std::errc() || ptr != part.data() + part.size()) {
            throw UsageError(std::string(field) + ": not a non-negative integer: '" + raw + "'");
        }
        out.push_back(v);
    }
    return out;
}

std::string sha256_hex(const std::string &bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    }
    return hex.str();
}

std::string file_sha256(const fs::path &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw NotFound("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    return sha256_hex(buf.str());
}

void ExperimentConfig::validate() const {
    if (algo != "qaa" && algo != "qaoa") {
        throw UsageError("algo: expected qaa or qaoa, got '" + algo + "'");
    }
    if (instances.empty()) {
        throw UsageError("instance: at least one instance file is required");
    }
    if (n_list) {
        if (n_list->empty()) {
            throw UsageError("n-list: empty");
        }
        for (std::size_t n : *n_list) {
            if (n == 0) {
                throw UsageError("n-list: sizes must be positive");
            }
        }
    }
    if (lambda && (!std::isfinite(*lambda) || *lambda < 0.0)) {
        throw UsageError("lambda: must be finite and >= 0");
    }
    if (xi && !std::isfinite(*xi)) {
        throw UsageError("xi: must be finite");
    }
    if (algo == "qaa") {
        if (p_list.empty()) {
            throw UsageError("p: at least one depth is required");
        }
        for (std::size_t p : p_list) {
            if (p == 0) {
                throw UsageError("p: depths must be positive");
            }
        }
        if (!std::isfinite(delta) || delta <= 0.0) {
            throw UsageError("delta: must be > 0");
        }
    } else {
        if (p_max == 0) {
            throw UsageError("pmax: must be positive");
        }
        if (walkers == 0) {
            throw UsageError("walkers: must be positive");
        }
        if (!std::isfinite(rho) || rho < 0.0) {
            throw UsageError("rho: must be >= 0");
        }
        if (iters == 0) {
            throw UsageError("iters: must be positive");
        }
    }
    if (repetitions == 0) {
        throw UsageError("repetitions: must be positive");
    }
    if (max_qubits == 0 || max_qubits > kDefaultMaxQubits) {
        throw UsageError("max-qubits: must be in [1, " + std::to_string(kDefaultMaxQubits) + "]");
    }
    if (out.empty()) {
        throw UsageError("out: an output path is required");
    }
}

json ExperimentConfig::to_json() const {
    json j = {{"algo", algo},
              {"instances", instances},
              {"n_list", n_list ? json(*n_list) : json(nullptr)},
              {"lambda", lambda ? json(*lambda) : json(nullptr)},
              {"xi", xi ? json(*xi) : json(nullptr)},
              {"n_meas", n_meas},
              {"repetitions", repetitions},
              {"seed", seed},
              {"max_qubits", max_qubits}};
    if (algo == "qaa") {
        j["p"] = p_list;
        j["delta"] = delta;
    } else {
        j["pmax"] = p_max;
        j["walkers"] = walkers;
        j["rho"] = rho;
        j["iters"] = iters;
    }
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const json &j) {
    try {
        ExperimentConfig c;
        c.algo = j.at("algo").get<std::string>();
        c.instances = j.at("instances").get<std::vector<std::string>>();
        if (!j.at("n_list").is_null()) {
            c.n_list = j.at("n_list").get<std::vector<std::size_t>>();
        }
        if (!j.at("lambda").is_null()) {
            c.lambda = j.at("lambda").get<double>();
        }
        if (!j.at("xi").is_null()) {
            c.xi = j.at("xi").get<double>();
        }
        c.n_meas = j.at("n_meas").get<std::uint64_t>();
        c.repetitions = j.at("repetitions").get<std::size_t>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.max_qubits = j.at("max_qubits").get<std::size_t>();
        if (c.algo == "qaa") {
            c.p_list = j.at("p").get<std::vector<std::size_t>>();
            c.delta = j.at("delta").get<double>();
        } else {
            c.p_max = j.at("pmax").get<std::size_t>();
            c.walkers = j.at("walkers").get<std::size_t>();
            c.rho = j.at("rho").get<double>();
            c.iters = j.at("iters").get<std::size_t>();
        }
        return c;
    } catch (const json::exception &e) {
        throw ParseError(std::string("manifest config: ") + e.what());
    }
}

namespace {

constexpr const char *kMetricsHeader = "run_id,n,lambda,algo,p,delta,n_meas,seed,alpha,alpha_mp,p_gs,gs_fraction";

/// Everything one (instance, n, repetition, p) run contributes to the outputs.
struct RunRecord {
    std::size_t instance = 0;
    std::size_t n = 0;
    double lambda = 0.0;
    std::size_t rep = 0;
    std::uint64_t seed = 0;
    std::size_t p = 0;
    double delta = kNaN;  ///< NaN for qaoa
    std::optional<MetricsReport> metrics;
    std::optional<AngleSchedule> schedule;
    std::optional<CpCurve> cp;
    std::vector<HistogramBin> hist;
    std::string error;
};

std::string sub_id(const std::string &run_id, const RunRecord &r) {
    return run_id + ":i" + std::to_string(r.instance) + ":n" + std::to_string(r.n) + ":r" +
           std::to_string(r.rep) + ":p" + std::to_string(r.p);
}

void fill_outputs(RunRecord &rec, const Problem &prob, const Statevector &state,
                  const std::optional<ShotCounts> &counts, MetricsReport metrics, bool want_curves) {
    rec.metrics = metrics;
    if (!want_curves) {
        return;
    }
    const Distribution dist = counts ? Distribution::of(*counts) : Distribution::of(state);
    const auto thresholds = cp_thresholds();
    rec.cp = cumulative_probability(dist, prob.table, prob.spectrum, thresholds);
    rec.hist = ratio_histogram(dist, prob.table, prob.spectrum, 0.01);
}

void run_qaa(const ExperimentConfig &cfg, const Problem &prob, const Rng &rep_stream, RunRecord base,
             std::vector<RunRecord> &records, bool curves) {
    for (std::size_t p : cfg.p_list) {
        RunRecord rec = base;
        rec.p = p;
        rec.delta = cfg.delta;
        try {
            std::optional<ShotMode> shots;
            if (cfg.n_meas > 0) {
                shots = ShotMode{cfg.n_meas, rep_stream.substream(p)};
            }
            QaaResult r = qaa_run(prob.table, prob.spectrum, {p, cfg.delta}, shots);
            rec.schedule = r.schedule;
            fill_outputs(rec, prob, r.state, r.counts, r.metrics, curves);
        } catch (const ResourceLimit &e) {
            rec.error = e.what();
        } catch (const DegenerateInstance &e) {
            rec.error = e.what();
        }
        records.push_back(std::move(rec));
    }
}

void run_qaoa(const ExperimentConfig &cfg, const Problem &prob, const Rng &rep_stream, RunRecord base,
              std::vector<RunRecord> &records, bool curves) {
    LadderConfig lc;
    lc.p_max = cfg.p_max;
    lc.walkers = cfg.walkers;
    lc.rho = cfg.rho;
    lc.optimizer.max_evals = cfg.iters;
    lc.seed = rep_stream.substream(1).next_u64();
    if (cfg.n_meas > 0) {
        lc.shots = ShotMode{cfg.n_meas, rep_stream.substream(2)};
    }
    try {
        const DepthLadderResult ladder = qaoa_ladder(prob.table, prob.spectrum, lc);
        const Rng final_shots = rep_stream.substream(3);
        for (const auto &d : ladder.records) {
            RunRecord rec = base;
            rec.p = d.p;
            rec.schedule = d.schedule;
            const Statevector state = run_circuit(prob.table, d.schedule, cfg.max_qubits);
            std::optional<ShotCounts> counts;
            MetricsReport m;
            if (cfg.n_meas > 0) {
                counts = sample(state, cfg.n_meas, final_shots.substream(d.p));
                m = shot_estimators(*counts, prob.table, prob.spectrum);
                m.p_gs = ground_probability(state, prob.spectrum);
            } else {
                m = exact_metrics(state, prob.table, prob.spectrum);
            }
            fill_outputs(rec, prob, state, counts, m, curves);
            records.push_back(std::move(rec));
        }
    } catch (const std::exception &e) {
        if (!dynamic_cast<const ResourceLimit *>(&e) && !dynamic_cast<const DegenerateInstance *>(&e)) {
            throw;
        }
        for (std::size_t p = 1; p <= cfg.p_max; ++p) {
            RunRecord rec = base;
            rec.p = p;
            rec.error = e.what();
            records.push_back(std::move(rec));
        }
    }
}

}  // namespace

RunOutputs run_experiment(const ExperimentConfig &cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<InstanceSpec> specs;
    for (const auto &path : cfg.instances) {
        specs.push_back(override_spec(load_instance_spec(path), cfg.lambda, cfg.xi));
    }
    if (cfg.n_list) {
        for (std::size_t i = 0; i < specs.size(); ++i) {
            for (std::size_t n : *cfg.n_list) {
                if (n > specs[i].n) {
                    throw UsageError("n-list: size " + std::to_string(n) + " exceeds the " +
                                     std::to_string(specs[i].n) + " sites of " + cfg.instances[i]);
                }
            }
        }
    }
    const json instances = instance_records(cfg.instances);
    const json config = cfg.to_json();
    RunOutputs outputs;
    outputs.run_id = make_run_id(cfg.algo, config, instances);
    const bool curves = !cfg.cp_out.empty() || !cfg.hist_out.empty();

    const Rng master(cfg.seed);
    std::vector<RunRecord> records;
    json rep_streams = json::array();
    for (std::size_t r = 0; r < cfg.repetitions; ++r) {
        rep_streams.push_back(master.substream(r).stream());
    }

    for (std::size_t i = 0; i < specs.size(); ++i) {
        std::vector<std::optional<std::size_t>> sizes;
        if (cfg.n_list) {
            sizes.assign(cfg.n_list->begin(), cfg.n_list->end());
        } else {
            sizes.push_back(std::nullopt);
        }
        for (const auto &n : sizes) {
            RunRecord base;
            base.instance = i;
            base.n = n.value_or(specs[i].n);
            base.lambda = specs[i].lambda;
            std::optional<Problem> prob;
            std::string prep_error;
            try {
                prob.emplace(prepare(specs[i], n, cfg.max_qubits));
            } catch (const ResourceLimit &e) {
                prep_error = e.what();
            }
            for (std::size_t r = 0; r < cfg.repetitions; ++r) {
                const Rng rep_stream = master.substream(r);
                base.rep = r;
                base.seed = rep_stream.stream();
                if (!prob) {
                    const std::vector<std::size_t> depths =
                        cfg.algo == "qaa" ? cfg.p_list : std::vector<std::size_t>{};
                    const std::size_t count = cfg.algo == "qaa" ? depths.size() : cfg.p_max;
                    for (std::size_t k = 0; k < count; ++k) {
                        RunRecord rec = base;
                        rec.p = cfg.algo == "qaa" ? depths[k] : k + 1;
                        if (cfg.algo == "qaa") {
                            rec.delta = cfg.delta;
                        }
                        rec.error = prep_error;
                        records.push_back(std::move(rec));
                    }
                    continue;
                }
                if (cfg.algo == "qaa") {
                    run_qaa(cfg, *prob, rep_stream, base, records, curves);
                } else {
                    run_qaoa(cfg, *prob, rep_stream, base, records, curves);
                }
            }
        }
    }

    // Deterministic order: instance, n, repetition, p.
    std::stable_sort(records.begin(), records.end(), [](const RunRecord &a, const RunRecord &b) {
        return std::tie(a.instance, a.n, a.rep, a.p) < std::tie(b.instance, b.n, b.rep, b.p);
    });

    CsvWriter metrics(kMetricsHeader);
    CsvWriter cp("run_id,threshold,cp");
    CsvWriter hist("run_id,bin_lo,mass");
    json errors = json::array();
    json schedules = json::array();
    for (const auto &rec : records) {
        const std::string delta = cfg.algo == "qaa" ? format_number(rec.delta) : std::string();
        if (rec.metrics) {
            const auto &m = *rec.metrics;
            metrics.row(outputs.run_id, rec.n, rec.lambda, cfg.algo, rec.p, delta, cfg.n_meas,
                        std::to_string(rec.seed), m.alpha, m.alpha_mp, m.p_gs.value_or(kNaN), m.gs_fraction);
            ++outputs.runs;
        } else {
            metrics.row(outputs.run_id, rec.n, rec.lambda, cfg.algo, rec.p, delta, cfg.n_meas,
                        std::to_string(rec.seed), kNaN, kNaN, kNaN, kNaN);
            const std::string msg = "instance " + std::to_string(rec.instance) + " n=" + std::to_string(rec.n) +
                                    " repetition " + std::to_string(rec.rep) + " p=" + std::to_string(rec.p) +
                                    ": " + rec.error;
            outputs.errors.push_back(msg);
            errors.push_back(msg);
        }
        if (rec.cp) {
            const std::string id = sub_id(outputs.run_id, rec);
            for (std::size_t k = 0; k < rec.cp->thresholds.size(); ++k) {
                cp.row(id, rec.cp->thresholds[k], rec.cp->values[k]);
            }
            for (const auto &b : rec.hist) {
                hist.row(id, b.lo, b.mass);
            }
        }
        if (rec.schedule) {
            schedules.push_back({{"instance", rec.instance},
                                 {"n", rec.n},
                                 {"repetition", rec.rep},
                                 {"p", rec.p},
                                 {"schedule", schedule_to_json(*rec.schedule)}});
        }
    }

    std::vector<fs::path> files{cfg.out};
    write_text(cfg.out, metrics.text());
    if (!cfg.cp_out.empty()) {
        write_text(cfg.cp_out, cp.text());
        files.emplace_back(cfg.cp_out);
    }
    if (!cfg.hist_out.empty()) {
        write_text(cfg.hist_out, hist.text());
        files.emplace_back(cfg.hist_out);
    }
    if (!cfg.fit_out.empty()) {
        // 1/p_gs against n, all instances and repetitions jointly, per (lambda, p).
        std::map<std::pair<double, std::size_t>, std::pair<std::vector<double>, std::vector<double>>> points;
        for (const auto &rec : records) {
            if (rec.metrics && rec.metrics->p_gs && *rec.metrics->p_gs > 0.0) {
                auto &pt = points[{rec.lambda, rec.p}];
                pt.first.push_back(static_cast<double>(rec.n));
                pt.second.push_back(1.0 / *rec.metrics->p_gs);
            }
        }
        CsvWriter fit("run_id,algo,lambda,p,base,prefactor,points");
        for (const auto &[key, pt] : points) {
            if (std::adjacent_find(pt.first.begin(), pt.first.end(), std::not_equal_to<>()) == pt.first.end()) {
                continue;  // a single size has no slope
            }
            const ExponentialFit e = fit_exponential(pt.first, pt.second);
            fit.row(outputs.run_id, cfg.algo, key.first, key.second, e.base, e.prefactor, pt.first.size());
        }
        write_text(cfg.fit_out, fit.text());
        files.emplace_back(cfg.fit_out);
    }
    for (const auto &f : files) {
        outputs.files.push_back(f.string());
    }

    json manifest = {{"run_id", outputs.run_id},
                     {"command", cfg.algo},
                     {"config", config},
                     {"instances", instances},
                     {"seeds", {{"master", cfg.seed}, {"repetition_streams", rep_streams}}},
                     {"errors", errors},
                     {"schedules", schedules}};
    outputs.manifest = manifest_path(cfg.out);
    write_manifest(cfg.out, manifest, files, seconds_since(t0));
    return outputs;
}

namespace {

struct Stats {
    std::size_t count = 0;
    double mean = kNaN;
    double stddev = kNaN;
};

Stats stats_of(const std::vector<double> &v) {
    Stats s;
    s.count = v.size();
    if (v.empty()) {
        return s;
    }
    double sum = 0.0;
    for (double x : v) {
        sum += x;
    }
    s.mean = sum / static_cast<double>(v.size());
    double sq = 0.0;
    for (double x : v) {
        sq += (x - s.mean) * (x - s.mean);
    }
    s.stddev = v.size() > 1 ? std::sqrt(sq / static_cast<double>(v.size() - 1)) : 0.0;
    return s;
}

std::string read_text(const fs::path &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw NotFound("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

std::string metrics_summary(const fs::path &csv, const std::string &run_id) {
    std::istringstream in(read_text(csv));
    std::string line;
    if (!std::getline(in, line) || line != kMetricsHeader) {
        throw ParseError(csv.string() + ": not a metrics CSV");
    }
    struct Group {
        std::string key;
        std::map<std::string, std::vector<double>> values;
        std::size_t rows = 0;
        std::size_t failed = 0;
    };
    static const char *kFields[] = {"alpha", "alpha_mp", "p_gs", "gs_fraction"};
    std::vector<Group> groups;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto c = split(line, ',');
        if (c.size() != 12) {
            throw ParseError(csv.string() + ": line " + std::to_string(line_no) + ": expected 12 fields");
        }
        if (c[0] != run_id) {
            continue;
        }
        const std::string key = "n=" + c[1] + " lambda=" + c[2] + " algo=" + c[3] + " p=" + c[4] +
                                (c[5].empty() ? "" : " delta=" + c[5]) + " n_meas=" + c[6];
        auto it = std::find_if(groups.begin(), groups.end(), [&](const Group &g) { return g.key == key; });
        if (it == groups.end()) {
            groups.push_back({key, {}, 0, 0});
            it = groups.end() - 1;
        }
        ++it->rows;
        if (c[8] == "nan") {
            ++it->failed;
            continue;
        }
        for (std::size_t f = 0; f < 4; ++f) {
            if (c[8 + f] != "nan") {
                it->values[kFields[f]].push_back(std::stod(c[8 + f]));
            }
        }
    }
    std::ostringstream out;
    for (const auto &g : groups) {
        out << g.key << " runs=" << g.rows << " failed=" << g.failed;
        for (const char *field : kFields) {
            const auto it = g.values.find(field);
            const Stats s = stats_of(it == g.values.end() ? std::vector<double>{} : it->second);
            out << " " << field << "=" << format_number(s.mean) << " (std " << format_number(s.stddev) << ")";
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace

std::string report(const std::string &run_id, const fs::path &dir) {
    if (run_id.empty()) {
        throw UsageError("run-id: empty");
    }
    if (!fs::is_directory(dir)) {
        throw NotFound("run " + run_id + ": directory " + dir.string() + " does not exist");
    }
    std::vector<fs::path> candidates;
    for (const auto &entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_regular_file() && name.size() > 14 && name.ends_with(".manifest.json")) {
            candidates.push_back(entry.path());
        }
    }
    std::sort(candidates.begin(), candidates.end());
    for (const auto &path : candidates) {
        json m = json::parse(read_text(path), nullptr, false);
        if (m.is_discarded() || !m.is_object() || m.value("run_id", "") != run_id) {
            continue;
        }
        std::ostringstream out;
        const std::string command = m.value("command", "");
        out << "run " << run_id << " (" << command << ")\n";
        if (m.contains("errors") && !m["errors"].empty()) {
            out << m["errors"].size() << " failed run(s)\n";
        }
        if (m.contains("summary")) {
            for (const auto &line : m["summary"]) {
                out << line.get<std::string>() << "\n";
            }
        }
        if ((command == "qaa" || command == "qaoa") && m.contains("outputs") && !m["outputs"].empty()) {
            out << metrics_summary(path.parent_path() / m["outputs"][0].get<std::string>(), run_id);
        }
        return out.str();
    }
    throw NotFound("run " + run_id + ": no manifest in " + dir.string());
}

namespace {

/// Flags shared by every subcommand that reads an instance file.
struct InstanceFlags {
    std::vector<std::string> instances;
    std::string n_list;
    double lambda = 0.0;
    double xi = kDefaultXi;
    CLI::Option *lambda_opt = nullptr;
    CLI::Option *xi_opt = nullptr;
    CLI::Option *n_opt = nullptr;

    void add(CLI::App *app, bool many) {
        if (many) {
            app->add_option("--instance", instances, "Instance or site file (repeatable)")->required();
        } else {
            app->add_option("--instance", instances, "Instance or site file")->required()->expected(1);
        }
        n_opt = app->add_option("--n-list,--n", n_list, "Comma list of prefix sizes (default: all sites)");
        lambda_opt = app->add_option("--lambda", lambda, "Penalty weight override");
        xi_opt = app->add_option("--xi", xi, "Area weight override");
    }
    std::optional<double> lambda_override() const {
        return lambda_opt->count() ? std::optional(lambda) : std::nullopt;
    }
    std::optional<double> xi_override() const { return xi_opt->count() ? std::optional(xi) : std::nullopt; }
    std::optional<std::vector<std::size_t>> sizes() const {
        if (!n_opt->count()) {
            return std::nullopt;
        }
        auto v = parse_size_list(n_list, "n-list");
        for (std::size_t n : v) {
            if (n == 0) {
                throw UsageError("n-list: sizes must be positive");
            }
        }
        return v;
    }
    InstanceSpec load(std::size_t k = 0) const {
        if (lambda_opt->count() && (!std::isfinite(lambda) || lambda < 0.0)) {
            throw UsageError("lambda: must be finite and >= 0");
        }
        return override_spec(load_instance_spec(instances.at(k)), lambda_override(), xi_override());
    }
};

std::vector<std::optional<std::size_t>> size_choices(const InstanceFlags &f, const InstanceSpec &spec) {
    std::vector<std::optional<std::size_t>> out;
    if (auto v = f.sizes()) {
        for (std::size_t n : *v) {
            if (n > spec.n) {
                throw UsageError("n-list: size " + std::to_string(n) + " exceeds the " + std::to_string(spec.n) +
                                 " available sites");
            }
            out.emplace_back(n);
        }
    } else {
        out.emplace_back(std::nullopt);
    }
    return out;
}

int cmd_generate(std::size_t n, const std::string &bbox_text, double rmax, std::uint64_t seed,
                 const std::string &label, const std::string &out_path, std::ostream &out) {
    const auto b = parse_real_grid(bbox_text, "bbox");
    if (b.size() != 4 || bbox_text.find(':') != std::string::npos) {
        throw UsageError("bbox: expected x0,y0,x1,y1");
    }
    if (n == 0) {
        throw UsageError("n: must be positive");
    }
    if (!(rmax > 0.0)) {
        throw UsageError("rmax: must be > 0");
    }
    if (!(b[2] > b[0]) || !(b[3] > b[1])) {
        throw UsageError("bbox: need x1 > x0 and y1 > y0");
    }
    SiteSet s = generate_instance(n, {b[0], b[1], b[2], b[3]}, rmax, seed);
    if (!label.empty()) {
        s.label = label;
    }
    save_sites(s, out_path);
    out << "wrote " << n << " sites to " << out_path << "\n";
    return kExitOk;
}

int cmd_solve_exact(const InstanceFlags &f, std::size_t cap, const std::string &out_path, std::ostream &out) {
    const InstanceSpec spec = f.load();
    const auto sizes = size_choices(f, spec);
    if (sizes.size() != 1) {
        throw UsageError("n: solve-exact takes a single size");
    }
    const IsingInstance inst = spec.build(sizes[0]);
    const Spectrum s = brute_force(inst, cap);
    const auto hist = connectivity_histogram(inst);
    json conn = json::object();
    for (auto [deg, count] : hist) {
        conn[std::to_string(deg)] = count;
    }
    json ground = json::array();
    for (std::uint64_t x : s.ground_strings) {
        ground.push_back(bitstring(x, inst.n()));
    }
    json j = {{"n", inst.n()},
              {"xi", inst.xi()},
              {"lambda", inst.lambda()},
              {"n_t", inst.n_t()},
              {"h_min", s.h_min},
              {"h_max", s.h_max},
              {"gap", s.gap},
              {"ground_strings", ground},
              {"ground_indices", s.ground_strings},
              {"mean_degree", mean_degree(hist)},
              {"connectivity", conn},
              {"instance", instance_to_json(inst)}};
    if (out_path.empty()) {
        out << j.dump(2) << "\n";
    } else {
        write_text(out_path, j.dump(2) + "\n");
        out << "n=" << inst.n() << " h_min=" << format_number(s.h_min) << " ground=" << ground[0].get<std::string>()
            << " -> " << out_path << "\n";
    }
    return kExitOk;
}

int cmd_delta_sweep(const InstanceFlags &f, const std::string &p_text, const std::string &grid_text,
                    std::size_t max_qubits, const std::string &out_path, std::ostream &out) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto depths = parse_size_list(p_text, "p");
    for (std::size_t p : depths) {
        if (p == 0) {
            throw UsageError("p: depths must be positive");
        }
    }
    const auto deltas = parse_real_grid(grid_text, "delta-grid");
    for (double d : deltas) {
        if (!(d > 0.0)) {
            throw UsageError("delta-grid: values must be > 0");
        }
    }
    const InstanceSpec spec = f.load();
    const auto sizes = size_choices(f, spec);
    const json instances = instance_records(f.instances);
    const json config = {{"n_list", f.sizes() ? json(*f.sizes()) : json(nullptr)},
                         {"lambda", spec.lambda},
                         {"xi", spec.xi},
                         {"p", depths},
                         {"delta_grid", deltas},
                         {"max_qubits", max_qubits}};
    const std::string run_id = make_run_id("delta-sweep", config, instances);

    CsvWriter csv("run_id,n,lambda,p,delta,energy,alpha");
    json summary = json::array();
    for (const auto &n : sizes) {
        const Problem prob = prepare(spec, n, max_qubits);
        const auto rows = delta_sweep(prob.table, depths, deltas);
        for (const auto &r : rows) {
            csv.row(run_id, prob.inst.n(), spec.lambda, r.p, r.delta, r.energy,
                    prob.spectrum.h_min != 0.0 ? r.energy / prob.spectrum.h_min : kNaN);
        }
        for (std::size_t p : depths) {
            const double best = best_delta(rows, p);
            const bool interior = best != deltas.front() && best != deltas.back();
            std::string line = "n=" + fmt_size(prob.inst.n()) + " p=" + fmt_size(p) +
                               " best delta=" + format_number(best) + (interior ? " (interior)" : " (grid edge)");
            out << line << "\n";
            summary.push_back(line);
        }
    }
    write_text(out_path, csv.text());
    json manifest = {{"run_id", run_id},
                     {"command", "delta-sweep"},
                     {"config", config},
                     {"instances", instances},
                     {"summary", summary}};
    write_manifest(out_path, manifest, {out_path}, seconds_since(t0));
    out << "run_id " << run_id << "\n";
    return kExitOk;
}

struct PminFlags {
    std::string solver = "qaa";
    double alpha = 0.85;
    std::string pgrid;
    double delta = 0.5;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    std::size_t walkers = 1;
    double rho = kDefaultWalkerRadius;
    std::size_t iters = kDefaultIterations;
    std::size_t max_qubits = kDefaultTableQubits;
};

int cmd_pmin(const InstanceFlags &f, const PminFlags &pf, const std::string &out_path, std::ostream &out) {
    const auto t0 = std::chrono::steady_clock::now();
    if (pf.solver != "qaa" && pf.solver != "qaoa") {
        throw UsageError("solver: expected qaa or qaoa");
    }
    if (!std::isfinite(pf.alpha)) {
        throw UsageError("alpha: must be finite");
    }
    if (pf.solver == "qaa" && !(pf.delta > 0.0)) {
        throw UsageError("delta: must be > 0");
    }
    if (pf.walkers == 0 || pf.iters == 0) {
        throw UsageError("walkers/iters: must be positive");
    }
    const auto grid = parse_size_list(pf.pgrid, "pgrid");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid[k] == 0 || (k > 0 && grid[k] <= grid[k - 1])) {
            throw UsageError("pgrid: depths must be positive and strictly ascending");
        }
    }
    const InstanceSpec spec = f.load();
    const auto sizes = size_choices(f, spec);
    const json instances = instance_records(f.instances);
    json config = {{"solver", pf.solver},       {"alpha", pf.alpha},  {"pgrid", grid},
                   {"n_list", f.sizes() ? json(*f.sizes()) : json(nullptr)},
                   {"lambda", spec.lambda},     {"xi", spec.xi},      {"n_meas", pf.shots},
                   {"seed", pf.seed},           {"max_qubits", pf.max_qubits}};
    if (pf.solver == "qaa") {
        config["delta"] = pf.delta;
    } else {
        config["walkers"] = pf.walkers;
        config["rho"] = pf.rho;
        config["iters"] = pf.iters;
    }
    const std::string run_id = make_run_id("pmin", config, instances);

    CsvWriter csv("run_id,n,lambda,algo,alpha_threshold,p,alpha,reached");
    json summary = json::array();
    json pmins = json::object();
    std::vector<double> fit_n, fit_p;
    const Rng master(pf.seed);
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        const Problem prob = prepare(spec, sizes[k], pf.max_qubits);
        std::variant<QaaSolver, QaoaSolver> solver = QaaSolver{pf.delta};
        if (pf.solver == "qaoa") {
            LadderConfig lc;
            lc.walkers = pf.walkers;
            lc.rho = pf.rho;
            lc.optimizer.max_evals = pf.iters;
            lc.seed = master.substream(k).substream(1).next_u64();
            solver = QaoaSolver{lc};
        }
        std::optional<ShotMode> shots;
        if (pf.shots > 0) {
            shots = ShotMode{pf.shots, master.substream(k).substream(2)};
        }
        const PminResult r = pmin_search(prob.table, prob.spectrum, solver, pf.alpha, grid, shots);
        const std::size_t n = prob.inst.n();
        for (auto [p, a] : r.trace) {
            csv.row(run_id, n, spec.lambda, pf.solver, pf.alpha, p, a, std::string(a >= pf.alpha ? "1" : "0"));
        }
        std::string line = "n=" + fmt_size(n) + " p_min=" + (r.p_min ? fmt_size(*r.p_min) : std::string("none"));
        out << line << "\n";
        summary.push_back(line);
        pmins[std::to_string(n)] = r.p_min ? json(*r.p_min) : json(nullptr);
        if (r.p_min) {
            fit_n.push_back(static_cast<double>(n));
            fit_p.push_back(static_cast<double>(*r.p_min));
        }
    }
    if (fit_n.size() >= 2) {
        const LinearFit fit = fit_linear(fit_n, fit_p);
        std::string line = "p_min linear fit: slope=" + format_number(fit.slope) +
                           " intercept=" + format_number(fit.intercept);
        out << line << "\n";
        summary.push_back(line);
    }
    write_text(out_path, csv.text());
    json manifest = {{"run_id", run_id},   {"command", "pmin"}, {"config", config},
                     {"instances", instances}, {"p_min", pmins}, {"summary", summary}};
    write_manifest(out_path, manifest, {out_path}, seconds_since(t0));
    out << "run_id " << run_id << "\n";
    return kExitOk;
}

struct ResourceFlags {
    std::string n_list;
    std::string p_list = "1";
    std::string lambda_case = "both";
    std::uint64_t budget = kReferenceGateBudget;
    double connectivity = kSparseMeanConnectivity;
    std::size_t depth_n = 100;
};

/// Literature estimates of the largest instance under the reference budget.
constexpr std::size_t kLiteratureMaxSitesSparse = 425;
constexpr std::size_t kLiteratureMaxSitesDense = 75;

int cmd_resources(const InstanceFlags &f, bool instance_mode, const ResourceFlags &rf,
                  const std::string &out_path, std::ostream &out) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto depths = parse_size_list(rf.p_list, "p");
    for (std::size_t p : depths) {
        if (p == 0) {
            throw UsageError("p: depths must be positive");
        }
    }
    if (rf.lambda_case != "0" && rf.lambda_case != "1" && rf.lambda_case != "both") {
        throw UsageError("lambda-case: expected 0, 1 or both");
    }
    if (!(rf.connectivity > 0.0)) {
        throw UsageError("connectivity: must be > 0");
    }
    CsvWriter csv("n,lambda_case,p,g1,g2,total");
    json instances = json::array();
    json config = {{"p", depths}, {"budget", rf.budget}, {"connectivity", rf.connectivity}};
    if (instance_mode) {
        const InstanceSpec spec = f.load();
        instances = instance_records(f.instances);
        config["n_list"] = f.sizes() ? json(*f.sizes()) : json(nullptr);
        config["lambda"] = spec.lambda;
        for (const auto &n : size_choices(f, spec)) {
            const IsingInstance inst = spec.build(n);
            for (std::size_t p : depths) {
                const ResourceEstimate e = resource_estimate(inst, p);
                csv.row(e.n, std::string(inst.lambda() > 0.0 ? "1" : "0"), p, e.g1, e.g2, e.total);
            }
        }
    } else if (!rf.n_list.empty()) {
        const auto ns = parse_size_list(rf.n_list, "n");
        config["n"] = ns;
        config["lambda_case"] = rf.lambda_case;
        for (std::size_t n : ns) {
            for (int c = 0; c < 2; ++c) {
                if (rf.lambda_case != "both" && rf.lambda_case != std::to_string(c)) {
                    continue;
                }
                for (std::size_t p : depths) {
                    const ResourceEstimate e = resource_estimate(n, c == 1, p, rf.connectivity);
                    csv.row(n, std::to_string(c), p, e.g1, e.g2, e.total);
                }
            }
        }
    }

    json summary = json::array();
    auto say = [&](const std::string &line) {
        out << line << "\n";
        summary.push_back(line);
    };
    const std::size_t p0 = depths.front();
    const std::string budget = std::to_string(rf.budget);
    const std::size_t dense = max_sites(rf.budget, true, p0, rf.connectivity);
    const std::size_t sparse = max_sites(rf.budget, false, p0, rf.connectivity);
    say("max_sites(budget=" + budget + ", lambda>0, p=" + fmt_size(p0) + ") = " + fmt_size(dense) +
        " (2N + N(N-1)/2 per layer; literature estimate " + fmt_size(kLiteratureMaxSitesDense) +
        ", difference " + std::to_string(static_cast<long long>(dense) -
                                         static_cast<long long>(kLiteratureMaxSitesDense)) + ")");
    say("max_sites(budget=" + budget + ", lambda=0, p=" + fmt_size(p0) + ") = " + fmt_size(sparse) +
        " (2N + round(" + format_number(rf.connectivity) + " N) per layer; literature estimate " +
        fmt_size(kLiteratureMaxSitesSparse) + ", difference " +
        std::to_string(static_cast<long long>(sparse) - static_cast<long long>(kLiteratureMaxSitesSparse)) + ")");
    say("max_depth(budget=" + budget + ", n=" + fmt_size(rf.depth_n) + ", lambda=0) = " +
        fmt_size(max_depth(rf.budget, rf.depth_n, false, rf.connectivity)));
    say("max_depth(budget=" + budget + ", n=" + fmt_size(rf.depth_n) + ", lambda>0) = " +
        fmt_size(max_depth(rf.budget, rf.depth_n, true, rf.connectivity)));
    say("gates(n=" + fmt_size(rf.depth_n) + ", lambda>0, p=1) = " +
        std::to_string(resource_estimate(rf.depth_n, true, 1, rf.connectivity).total));

    if (!out_path.empty()) {
        const std::string run_id = make_run_id("resources", config, instances);
        write_text(out_path, csv.text());
        json manifest = {{"run_id", run_id},   {"command", "resources"}, {"config", config},
                         {"instances", instances}, {"summary", summary}};
        write_manifest(out_path, manifest, {out_path}, seconds_since(t0));
        out << "run_id " << run_id << "\n";
    }
    return kExitOk;
}

int cmd_sample(const InstanceFlags &f, bool have_instance, const std::string &state_path, std::size_t p,
               double delta, std::uint64_t shots, std::uint64_t seed, const std::string &out_path,
               std::ostream &out) {
    const auto t0 = std::chrono::steady_clock::now();
    if (shots == 0) {
        throw UsageError("shots: must be positive");
    }
    if (state_path.empty() && !have_instance) {
        throw UsageError("sample: needs --state or --instance");
    }
    std::optional<Problem> prob;
    std::optional<Statevector> state;
    json config = {{"shots", shots}, {"seed", seed}};
    json instances = json::array();
    if (have_instance) {
        const InstanceSpec spec = f.load();
        const auto sizes = size_choices(f, spec);
        if (sizes.size() != 1) {
            throw UsageError("n: sample takes a single size");
        }
        prob.emplace(prepare(spec, sizes[0], kDefaultTableQubits));
        instances = instance_records(f.instances);
        config["n"] = prob->inst.n();
        config["lambda"] = spec.lambda;
    }
    if (!state_path.empty()) {
        state.emplace(load_state(state_path));
        config["state_sha256"] = file_sha256(state_path);
        if (prob && state->n() != prob->inst.n()) {
            throw UsageError("state: " + std::to_string(state->n()) + " qubits, instance has " +
                             std::to_string(prob->inst.n()));
        }
    } else {
        if (p == 0 || !(delta > 0.0)) {
            throw UsageError("p/delta: need p > 0 and delta > 0");
        }
        config["p"] = p;
        config["delta"] = delta;
        state.emplace(run_circuit(prob->table, qaa_circuit_schedule({p, delta})));
    }
    const std::string run_id = make_run_id("sample", config, instances);
    const ShotCounts counts = sample(*state, shots, Rng(seed));
    CsvWriter csv("run_id,bitstring,count");
    for (auto [x, c] : counts.counts) {
        csv.row(run_id, bitstring(x, counts.n), static_cast<std::size_t>(c));
    }
    json summary = json::array();
    if (prob) {
        const MetricsReport m = shot_estimators(counts, prob->table, prob->spectrum);
        std::string line = "alpha_est=" + format_number(m.alpha) + " (stderr " +
                           format_number(m.h_stderr / std::abs(prob->spectrum.h_min)) + ") alpha_mp=" +
                           format_number(m.alpha_mp) + " gs_fraction=" + format_number(m.gs_fraction) +
                           " p_gs=" + format_number(ground_probability(*state, prob->spectrum));
        out << line << "\n";
        summary.push_back(line);
    }
    write_text(out_path, csv.text());
    json manifest = {{"run_id", run_id},   {"command", "sample"}, {"config", config},
                     {"instances", instances}, {"summary", summary}};
    write_manifest(out_path, manifest, {out_path}, seconds_since(t0));
    out << "run_id " << run_id << "\n";
    return kExitOk;
}

}  // namespace

namespace {

void apply_thread_env() {
#ifdef _OPENMP
    if (const char *env = std::getenv("ANTQ_THREADS")) {
        const std::string text(env);
        int v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || v <= 0) {
            throw UsageError("ANTQ_THREADS: expected a positive integer, got '" + text + "'");
        }
        omp_set_num_threads(v);
    }
#endif
}

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

/// Flags of the qaa and qaoa batch subcommands.
struct ExperimentFlags {
    InstanceFlags inst;
    ExperimentConfig cfg;
    std::string p_text;
    std::string from_manifest;
    std::string dump_state;

    void add(CLI::App *app, const std::string &algo) {
        cfg.algo = algo;
        inst.add(app, true);
        app->get_option("--instance")->required(false);
        if (algo == "qaa") {
            app->add_option("--p", p_text, "Comma list of depths");
            app->add_option("--delta", cfg.delta, "Time step");
            app->add_option("--dump-state", dump_state, "Write the final state of a single run");
        } else {
            app->add_option("--pmax", cfg.p_max, "Deepest ladder level");
            app->add_option("--walkers", cfg.walkers, "Walkers per depth");
            app->add_option("--rho", cfg.rho, "Walker cloud half-width (rad)");
            app->add_option("--iters", cfg.iters, "Objective evaluations per local search");
        }
        app->add_option("--shots", cfg.n_meas, "Measurements per estimate (0 = exact)");
        app->add_option("--repetitions", cfg.repetitions, "Independent repetitions");
        app->add_option("--seed", cfg.seed, "Master seed");
        app->add_option("--max-qubits", cfg.max_qubits, "Largest instance simulated");
        app->add_option("--out", cfg.out, "Metrics CSV")->required();
        app->add_option("--cp-out", cfg.cp_out, "Cumulative probability CSV");
        app->add_option("--hist-out", cfg.hist_out, "Ratio histogram CSV");
        app->add_option("--fit-out", cfg.fit_out, "Fit of 1/p_gs against n");
        app->add_option("--from-manifest", from_manifest, "Re-run the configuration stored in a manifest");
    }

    ExperimentConfig resolve() const {
        ExperimentConfig c = cfg;
        if (!from_manifest.empty()) {
            json m = json::parse(read_text(from_manifest), nullptr, false);
            if (m.is_discarded() || !m.contains("config")) {
                throw ParseError(from_manifest + ": not a run manifest");
            }
            if (m.value("command", "") != cfg.algo) {
                throw UsageError("from-manifest: manifest is for '" + m.value("command", "") + "'");
            }
            ExperimentConfig stored = ExperimentConfig::from_json(m["config"]);
            stored.out = cfg.out;
            stored.cp_out = cfg.cp_out;
            stored.hist_out = cfg.hist_out;
            stored.fit_out = cfg.fit_out;
            return stored;
        }
        c.instances = inst.instances;
        c.n_list = inst.sizes();
        c.lambda = inst.lambda_override();
        c.xi = inst.xi_override();
        if (c.algo == "qaa") {
            if (p_text.empty()) {
                throw UsageError("p: required");
            }
            c.p_list = parse_size_list(p_text, "p");
        }
        return c;
    }
};

int cmd_experiment(const ExperimentFlags &flags, std::ostream &out, std::ostream &err) {
    const ExperimentConfig cfg = flags.resolve();
    cfg.validate();
    if (!flags.dump_state.empty() &&
        (cfg.instances.size() != 1 || cfg.repetitions != 1 || cfg.p_list.size() != 1 ||
         (cfg.n_list && cfg.n_list->size() != 1))) {
        throw UsageError("dump-state: needs exactly one instance, size, repetition and depth");
    }
    const RunOutputs r = run_experiment(cfg);
    if (!flags.dump_state.empty() && r.errors.empty()) {
        const InstanceSpec spec = override_spec(load_instance_spec(cfg.instances[0]), cfg.lambda, cfg.xi);
        std::optional<std::size_t> n;
        if (cfg.n_list) {
            n = cfg.n_list->front();
        }
        const Problem prob = prepare(spec, n, cfg.max_qubits);
        save_state(run_circuit(prob.table, qaa_circuit_schedule({cfg.p_list[0], cfg.delta})), flags.dump_state);
    }
    if (r.runs == 0 && !r.errors.empty()) {
        throw ResourceLimit("every run failed: " + r.errors.front());
    }
    for (const auto &e : r.errors) {
        err << "antq: warning: " << one_line(e) << "\n";
    }
    out << "run_id " << r.run_id << " (" << r.runs << " ok, " << r.errors.size() << " failed) -> " << cfg.out
        << "\n";
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Antenna-placement Ising instances solved by emulated QAOA and QAA circuits", "antq"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::function<int()> action;

    // generate
    std::size_t gen_n = 0;
    std::string gen_bbox = "0,0,2,2";
    double gen_rmax = 0.7;
    std::uint64_t gen_seed = 0;
    std::string gen_label, gen_out;
    auto *gen = app.add_subcommand("generate", "Random site file");
    gen->add_option("--n", gen_n, "Number of sites")->required();
    gen->add_option("--bbox", gen_bbox, "x0,y0,x1,y1");
    gen->add_option("--rmax", gen_rmax, "Largest coverage radius");
    gen->add_option("--seed", gen_seed, "Seed");
    gen->add_option("--label", gen_label, "Label stored in the file");
    gen->add_option("--out", gen_out, "Site file")->required();
    gen->callback([&] {
        action = [&] { return cmd_generate(gen_n, gen_bbox, gen_rmax, gen_seed, gen_label, gen_out, out); };
    });

    // solve-exact
    InstanceFlags solve_inst;
    std::size_t solve_cap = kDefaultBruteForceCap;
    std::string solve_out;
    auto *solve = app.add_subcommand("solve-exact", "Brute-force spectrum and instance summary");
    solve_inst.add(solve, false);
    solve->add_option("--cap", solve_cap, "Largest n enumerated");
    solve->add_option("--out", solve_out, "JSON output (default: stdout)");
    solve->callback([&] { action = [&] { return cmd_solve_exact(solve_inst, solve_cap, solve_out, out); }; });

    // qaa / qaoa
    ExperimentFlags qaa_flags, qaoa_flags;
    auto *qaa = app.add_subcommand("qaa", "Discretized linear anneal");
    qaa_flags.add(qaa, "qaa");
    qaa->callback([&] { action = [&] { return cmd_experiment(qaa_flags, out, err); }; });
    auto *qaoa = app.add_subcommand("qaoa", "QAOA depth ladder");
    qaoa_flags.add(qaoa, "qaoa");
    qaoa->callback([&] { action = [&] { return cmd_experiment(qaoa_flags, out, err); }; });

    // delta-sweep
    InstanceFlags sweep_inst;
    std::string sweep_p, sweep_grid = "0.1:3.0:0.1", sweep_out;
    std::size_t sweep_max = kDefaultTableQubits;
    auto *sweep = app.add_subcommand("delta-sweep", "Anneal energy over a time-step grid");
    sweep_inst.add(sweep, false);
    sweep->add_option("--p", sweep_p, "Comma list of depths")->required();
    sweep->add_option("--delta-grid", sweep_grid, "start:stop:step or comma list");
    sweep->add_option("--max-qubits", sweep_max, "Largest instance simulated");
    sweep->add_option("--out", sweep_out, "CSV output")->required();
    sweep->callback([&] {
        action = [&] { return cmd_delta_sweep(sweep_inst, sweep_p, sweep_grid, sweep_max, sweep_out, out); };
    });

    // pmin
    InstanceFlags pmin_inst;
    PminFlags pmin_flags;
    std::string pmin_out;
    auto *pmin = app.add_subcommand("pmin", "Smallest depth reaching a ratio threshold");
    pmin_inst.add(pmin, false);
    pmin->add_option("--solver", pmin_flags.solver, "qaa or qaoa");
    pmin->add_option("--alpha", pmin_flags.alpha, "Ratio threshold");
    pmin->add_option("--pgrid", pmin_flags.pgrid, "Ascending comma list of depths")->required();
    pmin->add_option("--delta", pmin_flags.delta, "Anneal time step");
    pmin->add_option("--shots", pmin_flags.shots, "Measurements per estimate (0 = exact)");
    pmin->add_option("--seed", pmin_flags.seed, "Master seed");
    pmin->add_option("--walkers", pmin_flags.walkers, "Walkers per depth");
    pmin->add_option("--rho", pmin_flags.rho, "Walker cloud half-width (rad)");
    pmin->add_option("--iters", pmin_flags.iters, "Objective evaluations per local search");
    pmin->add_option("--max-qubits", pmin_flags.max_qubits, "Largest instance simulated");
    pmin->add_option("--out", pmin_out, "CSV output")->required();
    pmin->callback([&] { action = [&] { return cmd_pmin(pmin_inst, pmin_flags, pmin_out, out); }; });

    // resources
    InstanceFlags res_inst;
    ResourceFlags res_flags;
    std::string res_out;
    auto *res = app.add_subcommand("resources", "Gate counts and budget limits");
    res->add_option("--instance", res_inst.instances, "Count the couplings of this instance")->expected(1);
    res_inst.n_opt = res->add_option("--n-list", res_inst.n_list, "Prefix sizes of the instance");
    res_inst.lambda_opt = res->add_option("--lambda", res_inst.lambda, "Penalty weight override");
    res_inst.xi_opt = res->add_option("--xi", res_inst.xi, "Area weight override");
    res->add_option("--n", res_flags.n_list, "Comma list of sizes for the closed-form counts");
    res->add_option("--p", res_flags.p_list, "Comma list of depths");
    res->add_option("--lambda-case", res_flags.lambda_case, "0, 1 or both");
    res->add_option("--budget", res_flags.budget, "Gate budget");
    res->add_option("--connectivity", res_flags.connectivity, "Mean connectivity for lambda = 0");
    res->add_option("--depth-n", res_flags.depth_n, "Size used for the depth limit");
    res->add_option("--out", res_out, "CSV output");
    res->callback([&] {
        action = [&] {
            return cmd_resources(res_inst, !res_inst.instances.empty(), res_flags, res_out, out);
        };
    });

    // sample
    InstanceFlags sample_inst;
    std::string sample_state, sample_out;
    std::size_t sample_p = 0;
    double sample_delta = 0.5;
    std::uint64_t sample_shots = 0, sample_seed = 0;
    auto *samp = app.add_subcommand("sample", "Measurement record of a stored or annealed state");
    sample_inst.add(samp, false);
    samp->get_option("--instance")->required(false);
    samp->add_option("--state", sample_state, "State dump");
    samp->add_option("--p", sample_p, "Anneal depth (without --state)");
    samp->add_option("--delta", sample_delta, "Anneal time step");
    samp->add_option("--shots", sample_shots, "Measurements")->required();
    samp->add_option("--seed", sample_seed, "Seed");
    samp->add_option("--out", sample_out, "CSV output")->required();
    samp->callback([&] {
        action = [&] {
            return cmd_sample(sample_inst, !sample_inst.instances.empty(), sample_state, sample_p, sample_delta,
                              sample_shots, sample_seed, sample_out, out);
        };
    });

    // report
    std::string rep_id, rep_dir = ".";
    auto *rep = app.add_subcommand("report", "Summary of a finished run");
    rep->add_option("--run-id", rep_id, "Run id")->required();
    rep->add_option("--dir", rep_dir, "Directory holding the manifests");
    rep->callback([&] {
        action = [&] {
            out << report(rep_id, rep_dir);
            return kExitOk;
        };
    });

    std::vector<const char *> argv;
    argv.push_back("antq");
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion &) {
        out << kVersion << "\n";
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "antq: usage error: " << one_line(e.what()) << "\n";
        return kExitUsage;
    }

    try {
        apply_thread_env();
        return action ? action() : kExitUsage;
    } catch (const UsageError &e) {
        err << "antq: usage error: " << one_line(e.what()) << "\n";
        return kExitUsage;
    } catch (const InvalidInput &e) {
        err << "antq: usage error: " << one_line(e.what()) << "\n";
        return kExitUsage;
    } catch (const ResourceLimit &e) {
        err << "antq: resource limit: " << one_line(e.what()) << "\n";
        return kExitResource;
    } catch (const ParseError &e) {
        err << "antq: data error: " << one_line(e.what()) << "\n";
        return kExitData;
    } catch (const NotFound &e) {
        err << "antq: not found: " << one_line(e.what()) << "\n";
        return kExitData;
    } catch (const DegenerateInstance &e) {
        err << "antq: data error: " << one_line(e.what()) << "\n";
        return kExitData;
    } catch (const fs::filesystem_error &e) {
        err << "antq: data error: " << one_line(e.what()) << "\n";
        return kExitData;
    } catch (const std::exception &e) {
        err << "antq: error: " << one_line(e.what()) << "\n";
        return 1;
    }
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args, out, err);
}

}  // namespace antq::cli
