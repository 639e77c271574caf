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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fadoa/fadoa.hpp"

namespace {

using namespace fadoa;

struct CommonOpts {
    std::string config_path;
    std::string out;
    std::uint64_t seed = 0;
    int trials = 0;
    std::string methods;
    bool fast = true;

    CLI::Option* o_config = nullptr;
    CLI::Option* o_out = nullptr;
    CLI::Option* o_seed = nullptr;
    CLI::Option* o_trials = nullptr;
    CLI::Option* o_methods = nullptr;
    CLI::Option* o_fast = nullptr;
};

void add_common(CLI::App* sub, CommonOpts& o) {
    o.o_config = sub->add_option("--config", o.config_path,
                                 "key = value config file")
                     ->check(CLI::ExistingFile);
    o.o_out = sub->add_option("--out", o.out,
                              "output CSV path ('-' prints to stdout)");
    o.o_seed = sub->add_option("--seed", o.seed, "master RNG seed");
    o.o_trials = sub->add_option("--trials", o.trials, "Monte Carlo trials per point")
                     ->check(CLI::Range(1, std::numeric_limits<int>::max()));
    o.o_methods = sub->add_option(
        "--methods", o.methods,
        "comma-separated subset of fa,music2d,esprit,omp,crlb");
    o.o_fast = sub->add_flag("--fast,!--no-fast", o.fast,
                             "coarse candidate stepping (1 deg) instead of refined");
}

ExperimentConfig build_config(const CommonOpts& o) {
    ExperimentConfig cfg;
    if (o.o_config->count()) cfg = load_config(o.config_path);
    if (o.o_seed->count()) cfg.seed = o.seed;
    if (o.o_trials->count()) cfg.trials = o.trials;
    if (o.o_methods->count()) {
        cfg.methods.clear();
        for (const std::string& m : detail::split(o.methods, ','))
            if (!m.empty()) cfg.methods.push_back(m);
    }
    if (o.o_fast->count()) cfg.fast = o.fast;
    if (o.o_out->count()) cfg.out_path = o.out;
    return cfg;
}

int run_sweep_command(const CommonOpts& o, const std::string& variable,
                      const std::vector<double>& fallback_values) {
    ExperimentConfig cfg = build_config(o);
    if (cfg.sweep_variable != variable) {
        cfg.sweep_variable = variable;
        cfg.sweep_values = fallback_values;
    }
    const bool to_stdout = cfg.out_path == "-";
    if (to_stdout) cfg.out_path = "";
    cfg.validate();

    const MetricsTable table = run_sweep(cfg);
    if (to_stdout || cfg.out_path.empty())
        std::fputs(metrics_csv_string(table).c_str(), stdout);
    else
        std::printf("wrote %s (%zu rows, %d trials per point)\n",
                    cfg.out_path.c_str(), table.size(), cfg.trials);
    return 0;
}

int run_correlation_map(const CommonOpts& o, double theta, double phi,
                        bool truth_given, double grid_step, bool step_given) {
    ExperimentConfig cfg;
    if (o.o_config->count())
        cfg = load_config(o.config_path);
    else
        cfg.n_x = cfg.n_z = 10;

    AnglePair truth = cfg.sources.at(0);
    if (truth_given) truth = {theta, phi};
    double step = 0.5;
    if (o.o_fast->count() && o.fast) step = 1.0;
    if (step_given) step = grid_step;

    std::string out = "correlation_map.csv";
    if (o.o_out->count()) out = o.out;
    const bool to_stdout = out == "-";

    const ArrayGeometry geometry = cfg.geometry();
    const Vec grid = angle_grid(0.0, 90.0, step);
    const Mat eta = correlation_map(truth, geometry, grid, grid,
                                    to_stdout ? "" : out);
    if (to_stdout) {
        std::printf("theta_deg,phi_deg,eta\n");
        for (Eigen::Index i = 0; i < grid.size(); ++i)
            for (Eigen::Index j = 0; j < grid.size(); ++j)
                std::printf("%.6f,%.6f,%.6f\n", grid(i), grid(j), eta(i, j));
        return 0;
    }

    double best = -1.0;
    AnglePair where{0.0, 0.0};
    for (Eigen::Index i = 0; i < grid.size(); ++i)
        for (Eigen::Index j = 0; j < grid.size(); ++j) {
            const AnglePair p{grid(i), grid(j)};
            if (std::max(std::abs(p.theta_deg - truth.theta_deg),
                         std::abs(p.phi_deg - truth.phi_deg)) < 2.0)
                continue;
            if (eta(i, j) > best) {
                best = eta(i, j);
                where = p;
            }
        }
    std::printf("wrote %s (%ld x %ld grid, %dx%d array, truth (%.1f, %.1f))\n",
                out.c_str(), static_cast<long>(grid.size()),
                static_cast<long>(grid.size()), cfg.n_x, cfg.n_z,
                truth.theta_deg, truth.phi_deg);
    std::printf("strongest correlation at least 2 deg away: %.4f at (%.1f, %.1f)\n",
                best, where.theta_deg, where.phi_deg);
    return 0;
}

int run_single(const CommonOpts& o) {
    const ExperimentConfig cfg = build_config(o);
    cfg.validate();
    const ArrayGeometry geometry = cfg.geometry();
    const FaSearchParams params = cfg.search_params();

    SourceScenario scenario;
    scenario.sources = cfg.sources;
    scenario.snr_db = cfg.snr_db;
    scenario.snapshots = cfg.snapshots;
    scenario.seed = cfg.seed;

    std::printf("array %dx%d, spacing %.2f, wavelength %.2f\n", cfg.n_x, cfg.n_z,
                cfg.spacing, cfg.wavelength);
    for (const AnglePair& s : scenario.sources)
        std::printf("source (%.2f, %.2f)\n", s.theta_deg, s.phi_deg);
    std::printf("snr %.1f dB, %d snapshots, seed %llu, virtual angle (%.2f, %.2f)\n",
                scenario.snr_db, scenario.snapshots,
                static_cast<unsigned long long>(scenario.seed),
                cfg.virtual_angle.theta_deg, cfg.virtual_angle.phi_deg);

    SourceScenario prescan_acq = scenario;
    prescan_acq.seed = substream_seed(scenario.seed, {0});
    const SnapshotMatrix y_upa =
        generate_snapshots(steering_matrix(scenario.sources, geometry), prescan_acq);
    const std::vector<PrescanPeak> peaks =
        coarse_prescan(y_upa, geometry, scenario.num_sources(), params);

    std::printf("\nprescan peaks:\n");
    int flagged = 0;
    for (const PrescanPeak& p : peaks) {
        std::printf("  (%.1f, %.1f)%s\n", p.angle.theta_deg, p.angle.phi_deg,
                    p.end_fire ? "  [end-fire]" : "");
        if (p.end_fire) ++flagged;
    }

    std::vector<AnglePair> estimates;
    if (flagged < scenario.num_sources()) {
        const SubspaceDecomposition sub =
            subspace_split(sample_covariance(y_upa), scenario.num_sources());
        const auto upa_fn = make_upa_steering_fn(geometry);
        for (const PrescanPeak& p : peaks) {
            if (p.end_fire) continue;
            const Peak refined =
                local_peak_search(sub.noise_basis, p.angle, params.refine_radius_deg,
                                  params.refine_step_deg, upa_fn, params.domain);
            std::printf("refined benign peak (%.1f, %.1f) -> (%.2f, %.2f)\n",
                        p.angle.theta_deg, p.angle.phi_deg,
                        refined.angle.theta_deg, refined.angle.phi_deg);
            estimates.push_back(refined.angle);
        }
    }

    if (flagged > 0) {
        const std::vector<AnglePair> grid = make_candidate_grid(peaks, params);
        const FaEstimate fa =
            estimate_fa_doa(scenario, geometry, cfg.virtual_angle, grid, params, flagged);
        std::printf("\ncandidate grid: %zu configurations, %zu admissible\n",
                    grid.size(), fa.scores.size());

        std::printf("   k   candidate          measured peak        eps_deg\n");
        for (const ConfigScore& s : fa.scores)
            std::printf("%4d  (%6.2f, %6.2f)   (%6.2f, %6.2f)   %10.6f\n", s.index,
                        s.candidate.theta_deg, s.candidate.phi_deg,
                        s.measured_peak.theta_deg, s.measured_peak.phi_deg,
                        s.epsilon_deg);

        if (o.o_out->count() && o.out != "-") {
            std::FILE* f = std::fopen(o.out.c_str(), "wb");
            if (!f) throw std::runtime_error("cannot open '" + o.out + "'");
            std::fprintf(f, "k,candidate_theta_deg,candidate_phi_deg,eps_deg\n");
            for (const ConfigScore& s : fa.scores)
                std::fprintf(f, "%d,%.6f,%.6f,%.6f\n", s.index,
                             s.candidate.theta_deg, s.candidate.phi_deg,
                             s.epsilon_deg);
            std::fclose(f);
            std::printf("wrote per-configuration scores to %s\n", o.out.c_str());
        }
        estimates.insert(estimates.end(), fa.estimates.begin(), fa.estimates.end());
    }

    std::printf("\nestimates vs truth:\n");
    const AssignmentResult assigned = best_assignment(
        estimates, scenario.sources, cfg.resolution_threshold_deg);
    for (std::size_t l = 0; l < scenario.sources.size(); ++l)
        std::printf("  truth (%.2f, %.2f): error %.4f deg\n",
                    scenario.sources[l].theta_deg, scenario.sources[l].phi_deg,
                    assigned.errors_deg[l]);
    for (const AnglePair& e : estimates)
        std::printf("  estimate (%.2f, %.2f)\n", e.theta_deg, e.phi_deg);
    std::printf("all sources within %.1f deg: %s\n", cfg.resolution_threshold_deg,
                assigned.within_threshold ? "yes" : "no");
    return 0;
}

int run_selftest(const CommonOpts& o) {
    const std::uint64_t seed = o.o_seed->count() ? o.seed : 1;
    int failures = 0;
    const auto report = [&](bool ok, const char* name, const std::string& detail) {
        std::printf("%s - %s (%s)\n", ok ? "ok  " : "FAIL", name, detail.c_str());
        if (!ok) ++failures;
    };

    {
        const ArrayGeometry flat = ArrayGeometry::upa(8, 8);
        const AnglePair virt{30.0, 30.0};
        const SteeringVector ref = steering_upa(virt, flat);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> draw(80.0, 89.9);
        double worst = 0.0;
        for (int rep = 0; rep < 50; ++rep) {
            const AnglePair truth{draw(rng), draw(rng)};
            const SteeringVector moved = steering_fa(
                truth,
                flat.with_displacements(solve_y_displacements(truth, virt, flat)));
            worst = std::max(worst, (moved - ref).cwiseAbs().maxCoeff());
        }
        char d[64];
        std::snprintf(d, sizeof(d), "max mismatch %.2e", worst);
        report(worst < 1e-10, "steering equivalence", d);
    }

    {
        const ArrayGeometry geometry = ArrayGeometry::upa(8, 8);
        const AnglePair truth{86.0, 86.0};
        std::vector<AnglePair> grid;
        for (int i = -1; i <= 1; ++i)
            for (int j = -1; j <= 1; ++j) grid.push_back({86.0 + i, 86.0 + j});
        SourceScenario s;
        s.sources = {truth};
        s.snapshots = 32;
        s.seed = seed;
        s.noise_scale = 0.0;
        const FaEstimate r = estimate_fa_doa(s, geometry, {30.0, 30.0}, grid);
        const bool ok = r.estimates.size() == 1 && r.estimates[0] == truth;
        report(ok, "noiseless search exactness",
               ok ? "picked the true grid node" : "picked a wrong node");
    }

    {
        double worst_herm = 0.0, worst_rot = 0.0;
        const ArrayGeometry g = ArrayGeometry::upa(4, 4);
        const Vec grid = angle_grid(0.0, 90.0, 15.0);
        const auto upa_fn = make_upa_steering_fn(g);
        CMat cols(16, grid.size() * grid.size());
        Eigen::Index c = 0;
        for (Eigen::Index i = 0; i < grid.size(); ++i)
            for (Eigen::Index j = 0; j < grid.size(); ++j)
                cols.col(c++) = upa_fn({grid(i), grid(j)});
        for (int rep = 0; rep < 20; ++rep) {
            GaussianStream rng(substream_seed(seed, {static_cast<std::uint64_t>(rep)}));
            CMat y(16, 40);
            rng.fill_complex(y, 1.0);
            const CMat r = sample_covariance(y);
            worst_herm =
                std::max(worst_herm, (r - r.adjoint()).cwiseAbs().maxCoeff());
            const SubspaceDecomposition d = subspace_split(r, 2);
            CMat m(14, 14);
            rng.fill_complex(m, 1.0);
            const CMat q = Eigen::HouseholderQR<CMat>(m).householderQ();
            const Vec s1 = music_values(d.noise_basis, cols);
            const Vec s2 = music_values(d.noise_basis * q, cols);
            worst_rot = std::max(
                worst_rot, ((s1 - s2).cwiseAbs().array() / s1.array()).maxCoeff());
        }
        char d[80];
        std::snprintf(d, sizeof(d), "hermitian defect %.1e, rotation drift %.1e",
                      worst_herm, worst_rot);
        report(worst_herm == 0.0 && worst_rot < 1e-9, "covariance invariants", d);
    }

    {
        ExperimentConfig cfg;
        cfg.sources = {{30.0, 30.0}};
        cfg.snapshots = 64;
        cfg.sweep_values = {10.0};
        cfg.methods = {"music2d", "crlb"};
        cfg.trials = 1;
        cfg.seed = seed;
        cfg.out_path = "";
        const std::string a = metrics_csv_string(run_sweep(cfg));
        const std::string b = metrics_csv_string(run_sweep(cfg));
        report(a == b && !a.empty(), "sweep determinism",
               a == b ? "identical csv" : "csv differs");
    }

    {
        const std::string header = metrics_csv_string({});
        report(header ==
                   "method,sweep_var,sweep_value,trials,rmse_deg,posr,mean_runtime_ms\n",
               "csv header", "schema string");
    }

    std::printf("%s\n", failures == 0 ? "selftest passed" : "selftest FAILED");
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fluid antenna array DOA estimation toolkit"};
    app.require_subcommand(1);

    CommonOpts snr_opts, snap_opts, corr_opts, single_opts, self_opts;

    CLI::App* sweep_snr =
        app.add_subcommand("sweep-snr", "Monte Carlo RMSE/PoSR sweep over SNR");
    add_common(sweep_snr, snr_opts);

    CLI::App* sweep_snap = app.add_subcommand(
        "sweep-snapshots", "Monte Carlo RMSE/PoSR sweep over snapshot count");
    add_common(sweep_snap, snap_opts);

    CLI::App* corr = app.add_subcommand(
        "correlation-map", "steering correlation map against a fixed true angle");
    add_common(corr, corr_opts);
    double theta = 86.0, phi = 86.0, grid_step = 0.5;
    CLI::Option* o_theta = corr->add_option("--theta", theta, "true azimuth in degrees");
    CLI::Option* o_phi = corr->add_option("--phi", phi, "true elevation in degrees");
    CLI::Option* o_step =
        corr->add_option("--grid-step", grid_step, "grid step in degrees")
            ->check(CLI::PositiveNumber);

    CLI::App* single = app.add_subcommand(
        "single-run", "one verbose trial of the reconfiguration method");
    add_common(single, single_opts);

    CLI::App* self = app.add_subcommand("selftest", "quick built-in sanity checks");
    add_common(self, self_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(sweep_snr))
            return run_sweep_command(snr_opts, "snr_db",
                                     {-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0});
        if (app.got_subcommand(sweep_snap))
            return run_sweep_command(snap_opts, "snapshots",
                                     {100.0, 200.0, 300.0, 400.0, 500.0});
        if (app.got_subcommand(corr))
            return run_correlation_map(corr_opts, theta, phi,
                                       o_theta->count() || o_phi->count(), grid_step,
                                       o_step->count() > 0);
        if (app.got_subcommand(single)) return run_single(single_opts);
        if (app.got_subcommand(self)) return run_selftest(self_opts);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
