// SPDX-License-Identifier: Apache-2.0
//
// fadoa: fluid antenna array DOA estimation toolkit
// Copyright 2026 The fadoa authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "fadoa/baselines.hpp"
#include "fadoa/pipeline.hpp"
#include "fadoa/signal_sim.hpp"
#include "fadoa/types.hpp"

namespace fadoa {

// Everything needed to reproduce one Monte Carlo sweep. Mirrors the config
// file schema documented in the README; field defaults are the reference
// setup (8x8 half-wavelength array, one end-fire source, virtual angle
// (30, 30), 100 trials).
struct ExperimentConfig {
    int n_x = 8;
    int n_z = 8;
    double spacing = 0.5;
    double wavelength = 1.0;
    std::vector<AnglePair> sources{{86.0, 86.0}};
    double snr_db = 10.0;
    int snapshots = 500;
    std::uint64_t seed = 12345;
    std::string sweep_variable = "snr_db";  // "snr_db" or "snapshots"
    std::vector<double> sweep_values{-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
    std::vector<std::string> methods{"fa", "music2d", "esprit", "omp", "crlb"};
    int trials = 100;
    double resolution_threshold_deg = 2.5;
    AnglePair virtual_angle{30.0, 30.0};
    bool fast = true;
    bool timing = false;  // real per-method timings break byte-reproducibility
    std::string out_path = "results.csv";

    ArrayGeometry geometry() const {
        return ArrayGeometry::upa(n_x, n_z, spacing, wavelength);
    }

    FaSearchParams search_params() const {
        return fast ? FaSearchParams::fast() : FaSearchParams::refined();
    }

    void validate() const {
        geometry().validate();
        if (sources.empty())
            throw std::invalid_argument("config: at least one source required");
        if (trials < 1)
            throw std::invalid_argument("config: trials must be >= 1");
        if (sweep_values.empty())
            throw std::invalid_argument("config: sweep_values must be non-empty");
        if (!(resolution_threshold_deg > 0.0))
            throw std::invalid_argument("config: resolution threshold must be positive");
        if (sweep_variable != "snr_db" && sweep_variable != "snapshots")
            throw std::invalid_argument("config: sweep_variable must be snr_db or snapshots");
        if (methods.empty())
            throw std::invalid_argument("config: methods must be non-empty");
        for (const std::string& m : methods)
            if (m != "fa" && m != "music2d" && m != "esprit" && m != "omp" && m != "crlb")
                throw std::invalid_argument("config: unknown method '" + m + "'");
        if (sweep_variable == "snapshots")
            for (double v : sweep_values)
                if (v < 1.0)
                    throw std::invalid_argument("config: snapshot counts must be >= 1");
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

inline double parse_double(const std::string& v, const std::string& key, int line) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != v.size() || v.empty())
        throw std::invalid_argument("config line " + std::to_string(line) +
                                    ": invalid number for '" + key + "'");
    return x;
}

inline bool parse_bool(const std::string& v, const std::string& key, int line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::invalid_argument("config line " + std::to_string(line) +
                                ": invalid boolean for '" + key + "'");
}

inline std::vector<AnglePair> parse_sources(const std::string& v, int line) {
    std::vector<AnglePair> out;
    for (const std::string& pair : split(v, ';')) {
        const std::vector<std::string> parts = split(pair, ',');
        if (parts.size() != 2)
            throw std::invalid_argument("config line " + std::to_string(line) +
                                        ": sources expects 'theta,phi;theta,phi;...'");
        out.push_back({parse_double(parts[0], "sources", line),
                       parse_double(parts[1], "sources", line)});
    }
    return out;
}

}  // namespace detail

// Flat key = value text; '#' starts a comment, blank lines ignored,
// unknown keys rejected.
inline ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string raw;
    int line = 0;
    while (std::getline(ss, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        raw = detail::trim(raw);
        if (raw.empty()) continue;
        const auto eq = raw.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line) +
                                        ": expected 'key = value'");
        const std::string key = detail::trim(raw.substr(0, eq));
        const std::string value = detail::trim(raw.substr(eq + 1));

        if (key == "n_x") cfg.n_x = static_cast<int>(detail::parse_double(value, key, line));
        else if (key == "n_z") cfg.n_z = static_cast<int>(detail::parse_double(value, key, line));
        else if (key == "spacing") cfg.spacing = detail::parse_double(value, key, line);
        else if (key == "wavelength") cfg.wavelength = detail::parse_double(value, key, line);
        else if (key == "sources") cfg.sources = detail::parse_sources(value, line);
        else if (key == "snr_db") cfg.snr_db = detail::parse_double(value, key, line);
        else if (key == "snapshots") cfg.snapshots = static_cast<int>(detail::parse_double(value, key, line));
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
        else if (key == "sweep_variable") cfg.sweep_variable = value;
        else if (key == "sweep_values") {
            cfg.sweep_values.clear();
            for (const std::string& v : detail::split(value, ','))
                cfg.sweep_values.push_back(detail::parse_double(v, key, line));
        } else if (key == "methods") {
            cfg.methods = detail::split(value, ',');
        } else if (key == "trials") cfg.trials = static_cast<int>(detail::parse_double(value, key, line));
        else if (key == "resolution_threshold_deg") cfg.resolution_threshold_deg = detail::parse_double(value, key, line);
        else if (key == "virtual_theta") cfg.virtual_angle.theta_deg = detail::parse_double(value, key, line);
        else if (key == "virtual_phi") cfg.virtual_angle.phi_deg = detail::parse_double(value, key, line);
        else if (key == "fast") cfg.fast = detail::parse_bool(value, key, line);
        else if (key == "timing") cfg.timing = detail::parse_bool(value, key, line);
        else if (key == "out") cfg.out_path = value;
        else
            throw std::invalid_argument("config line " + std::to_string(line) +
                                        ": unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("config: cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

// Per-source errors of the estimate set against the truth set under the
// assignment minimizing total squared error, plus whether any assignment
// keeps every pairing within the threshold. Exhaustive over permutations;
// source counts here are small.
struct AssignmentResult {
    std::vector<double> errors_deg;  // aligned to the truth order
    bool within_threshold = false;
};

inline AssignmentResult best_assignment(const std::vector<AnglePair>& estimates,
                                        const std::vector<AnglePair>& truths,
                                        double threshold_deg) {
    if (estimates.size() != truths.size())
        throw std::invalid_argument("best_assignment: estimate/truth length mismatch");
    const int count = static_cast<int>(truths.size());
    if (count > 9)
        throw std::invalid_argument("best_assignment: more than 9 sources unsupported");

    std::vector<int> perm(count);
    std::iota(perm.begin(), perm.end(), 0);
    AssignmentResult out;
    double best_total = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        double worst = 0.0;
        std::vector<double> errors(count);
        for (int l = 0; l < count; ++l) {
            const double e = angle_pair_error_deg(estimates[perm[l]], truths[l]);
            errors[l] = e;
            total += e * e;
            worst = std::max(worst, e);
        }
        if (total < best_total) {
            best_total = total;
            out.errors_deg = errors;
        }
        if (worst <= threshold_deg) out.within_threshold = true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

struct TrialRecord {
    std::string method;
    double sweep_value = 0.0;
    int trial = 0;
    std::vector<AnglePair> estimates;
    std::vector<double> per_source_error_deg;
    bool success = false;
    double runtime_ms = 0.0;
};

inline TrialRecord make_trial_record(const std::string& method, double sweep_value,
                                     int trial, std::vector<AnglePair> estimates,
                                     const std::vector<AnglePair>& truths,
                                     double threshold_deg, double runtime_ms = 0.0) {
    const AssignmentResult a = best_assignment(estimates, truths, threshold_deg);
    return {method, sweep_value, trial, std::move(estimates),
            a.errors_deg, a.within_threshold, runtime_ms};
}

// Root mean square angular error aggregated exactly as reported: per source,
// the square root of the mean squared error over trials; then the mean over
// sources. All trials count, failures included.
inline double rmse(const std::vector<TrialRecord>& records) {
    if (records.empty())
        throw std::invalid_argument("rmse: no records");
    const std::size_t num_src = records.front().per_source_error_deg.size();
    double acc = 0.0;
    for (std::size_t l = 0; l < num_src; ++l) {
        double mean_sq = 0.0;
        for (const TrialRecord& r : records) {
            const double e = r.per_source_error_deg.at(l);
            mean_sq += e * e;
        }
        mean_sq /= static_cast<double>(records.size());
        acc += std::sqrt(mean_sq);
    }
    return acc / static_cast<double>(num_src);
}

inline double posr(const std::vector<TrialRecord>& records) {
    if (records.empty())
        throw std::invalid_argument("posr: no records");
    std::size_t hits = 0;
    for (const TrialRecord& r : records)
        if (r.success) ++hits;
    return static_cast<double>(hits) / static_cast<double>(records.size());
}

struct MetricsRow {
    std::string method;
    std::string sweep_var;
    double sweep_value = 0.0;
    int trials = 0;
    double rmse_deg = 0.0;
    double posr = 0.0;
    double mean_runtime_ms = 0.0;
};

using MetricsTable = std::vector<MetricsRow>;

inline std::string metrics_csv_string(const MetricsTable& table) {
    std::string out = "method,sweep_var,sweep_value,trials,rmse_deg,posr,mean_runtime_ms\n";
    char buf[256];
    for (const MetricsRow& r : table) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%.6f,%d,%.6f,%.6f,%.6f\n",
                      r.method.c_str(), r.sweep_var.c_str(), r.sweep_value, r.trials,
                      r.rmse_deg, r.posr, r.mean_runtime_ms);
        out += buf;
    }
    return out;
}

inline void write_metrics_csv(const MetricsTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("write_metrics_csv: cannot open '" + path + "'");
    out << metrics_csv_string(table);
    if (!out)
        throw std::runtime_error("write_metrics_csv: write failed for '" + path + "'");
}

namespace detail {

class MethodTimer {
  public:
    explicit MethodTimer(bool enabled) : enabled_(enabled) {}

    template <typename Fn>
    auto time(Fn&& fn, double& runtime_ms) {
        if (!enabled_) {
            runtime_ms = 0.0;
            return fn();
        }
        const auto start = std::chrono::steady_clock::now();
        auto result = fn();
        const auto stop = std::chrono::steady_clock::now();
        runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
        return result;
    }

  private:
    bool enabled_;
};

}  // namespace detail

// Runs the configured Monte Carlo sweep and returns one metrics row per
// (method, sweep value). Baseline methods within a trial share the planar
// acquisition, giving a paired comparison; the reconfiguration method draws
// its own per-configuration snapshots from the same trial substream. Writes
// the CSV when config.out_path is non-empty. Row order: methods in config
// order, sweep values in config order. The bound method runs no trials and
// reports its trial count as 0.
inline MetricsTable run_sweep(const ExperimentConfig& config) {
    config.validate();
    const ArrayGeometry geometry = config.geometry();
    const FaSearchParams params = config.search_params();
    const Vec dict_grid = angle_grid(params.domain.lo_deg, params.domain.hi_deg,
                                     params.global_grid_step_deg);
    Music2dParams music_params;
    music_params.grid_step_deg = params.global_grid_step_deg;
    music_params.refine_radius_deg = params.refine_radius_deg;
    music_params.refine_step_deg = params.refine_step_deg;
    music_params.domain = params.domain;
    detail::MethodTimer timer(config.timing);

    const bool wants_upa_data =
        std::any_of(config.methods.begin(), config.methods.end(), [](const std::string& m) {
            return m == "music2d" || m == "esprit" || m == "omp";
        });

    // records[method][sweep index]
    std::vector<std::vector<std::vector<TrialRecord>>> records(
        config.methods.size(),
        std::vector<std::vector<TrialRecord>>(config.sweep_values.size()));
    std::vector<double> crlb_values(config.sweep_values.size(), 0.0);

    for (std::size_t vi = 0; vi < config.sweep_values.size(); ++vi) {
        const double value = config.sweep_values[vi];
        SourceScenario scenario;
        scenario.sources = config.sources;
        scenario.snr_db = config.snr_db;
        scenario.snapshots = config.snapshots;
        if (config.sweep_variable == "snr_db")
            scenario.snr_db = value;
        else
            scenario.snapshots = static_cast<int>(value);

        for (std::size_t mi = 0; mi < config.methods.size(); ++mi)
            if (config.methods[mi] == "crlb")
                crlb_values[vi] = crlb_rmse(scenario, geometry);

        for (int trial = 0; trial < config.trials; ++trial) {
            SourceScenario trial_scenario = scenario;
            trial_scenario.seed = substream_seed(
                config.seed, {static_cast<std::uint64_t>(vi),
                              static_cast<std::uint64_t>(trial)});

            SnapshotMatrix y_upa;
            if (wants_upa_data) {
                SourceScenario acq = trial_scenario;
                acq.seed = substream_seed(trial_scenario.seed, {0});
                y_upa = generate_snapshots(steering_matrix(scenario.sources, geometry), acq);
            }

            for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
                const std::string& method = config.methods[mi];
                if (method == "crlb") continue;
                double runtime_ms = 0.0;
                std::vector<AnglePair> estimates;
                if (method == "fa") {
                    estimates = timer.time(
                        [&] {
                            return fa_method_trial(trial_scenario, geometry,
                                                   config.virtual_angle, params);
                        },
                        runtime_ms);
                } else if (method == "music2d") {
                    estimates = timer.time(
                        [&] {
                            return music2d_upa(y_upa, geometry, scenario.num_sources(),
                                               music_params)
                                .estimates;
                        },
                        runtime_ms);
                } else if (method == "esprit") {
                    estimates = timer.time(
                        [&] {
                            return esprit2d_upa(y_upa, geometry, scenario.num_sources())
                                .estimates;
                        },
                        runtime_ms);
                } else if (method == "omp") {
                    estimates = timer.time(
                        [&] {
                            return omp_2d(y_upa, geometry, scenario.num_sources(),
                                          dict_grid, dict_grid)
                                .estimates;
                        },
                        runtime_ms);
                }
                records[mi][vi].push_back(make_trial_record(
                    method, value, trial, std::move(estimates), scenario.sources,
                    config.resolution_threshold_deg, runtime_ms));
            }
        }
    }

    MetricsTable table;
    for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
        for (std::size_t vi = 0; vi < config.sweep_values.size(); ++vi) {
            MetricsRow row;
            row.method = config.methods[mi];
            row.sweep_var = config.sweep_variable;
            row.sweep_value = config.sweep_values[vi];
            if (config.methods[mi] == "crlb") {
                row.trials = 0;
                row.rmse_deg = crlb_values[vi];
                row.posr = 0.0;
            } else {
                const std::vector<TrialRecord>& recs = records[mi][vi];
                row.trials = static_cast<int>(recs.size());
                row.rmse_deg = rmse(recs);
                row.posr = posr(recs);
                double total = 0.0;
                for (const TrialRecord& r : recs) total += r.runtime_ms;
                row.mean_runtime_ms = recs.empty() ? 0.0 : total / recs.size();
            }
            table.push_back(row);
        }
    }

    if (!config.out_path.empty())
        write_metrics_csv(table, config.out_path);
    return table;
}

// Steering-vector correlation of every grid angle against a fixed true
// angle. Returns the |theta| x |phi| map and optionally writes it as
// theta_deg,phi_deg,eta rows.
inline Mat correlation_map(AnglePair true_angle, const ArrayGeometry& geometry,
                           const Vec& theta_grid, const Vec& phi_grid,
                           const std::string& out_path = "") {
    geometry.validate();
    if (theta_grid.size() == 0 || phi_grid.size() == 0)
        throw std::invalid_argument("correlation_map: empty grid");
    const auto upa_fn = make_upa_steering_fn(geometry);
    const SteeringVector a_true = steering_fa(true_angle, geometry);
    Mat eta(theta_grid.size(), phi_grid.size());
    for (Eigen::Index i = 0; i < theta_grid.size(); ++i)
        for (Eigen::Index j = 0; j < phi_grid.size(); ++j)
            eta(i, j) = steering_correlation(
                a_true, upa_fn(AnglePair{theta_grid(i), phi_grid(j)}));

    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out)
            throw std::runtime_error("correlation_map: cannot open '" + out_path + "'");
        out << "theta_deg,phi_deg,eta\n";
        char buf[128];
        for (Eigen::Index i = 0; i < theta_grid.size(); ++i)
            for (Eigen::Index j = 0; j < phi_grid.size(); ++j) {
                std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f\n", theta_grid(i),
                              phi_grid(j), eta(i, j));
                out << buf;
            }
        if (!out)
            throw std::runtime_error("correlation_map: write failed for '" + out_path + "'");
    }
    return eta;
}

}  // namespace fadoa
