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
#include <cstdint>
#include <set>
#include <vector>

#include "fadoa/errors.hpp"
#include "fadoa/signal_sim.hpp"
#include "fadoa/steering.hpp"
#include "fadoa/subspace.hpp"
#include "fadoa/types.hpp"

namespace fadoa {

// Tuning knobs of the reconfiguration pipeline. The defaults are the refined
// setting (0.1 deg candidate grid); fast() trades candidate resolution for a
// much smaller configuration count.
//
// Virtual-angle verification is a two-stage local search: a 0.1 deg pass over
// a +/-1 deg window locates the displaced peak, then a 0.02 deg pass around
// that point resolves it. Near end-fire a 1 deg candidate offset in theta
// moves the virtual-domain peak by only a few hundredths of a degree, so a
// single coarse pass cannot rank neighboring candidates.
struct FaSearchParams {
    double candidate_window_deg = 5.0;   // half-width around each flagged peak
    double candidate_step_deg = 0.1;
    double verify_radius_deg = 1.0;      // stage 1 around the virtual angle
    double verify_step_deg = 0.1;
    double zoom_radius_deg = 0.12;       // stage 2 around the stage-1 peak
    double zoom_step_deg = 0.02;
    double min_separation_deg = 1.0;     // between selected candidates
    double end_fire_threshold_deg = 80.0;
    double max_virtual_deg = 70.0;
    double global_grid_step_deg = 1.0;   // prescan / conventional search
    double refine_radius_deg = 2.0;      // conventional local refinement
    double refine_step_deg = 0.1;
    double singular_tol = 1e-6;
    AngleDomain domain{};

    static FaSearchParams refined() { return {}; }

    static FaSearchParams fast() {
        FaSearchParams p;
        p.candidate_step_deg = 1.0;
        return p;
    }
};

// One array configuration of the candidate trajectory: the preset true angle
// and the displacement vector that maps it onto the virtual angle.
struct TrajectoryEntry {
    AnglePair candidate_true_angle;
    Vec y_displacements;
    int index = 0;
};

// Verification outcome for one configuration: the candidate true angle the
// configuration presets, the measured peak near the virtual angle, and the
// peak's distance epsilon from the virtual angle (degrees). The index counts
// surviving trajectory entries, so it also names the snapshot substream; grids
// with singular candidates make it differ from the grid position.
struct ConfigScore {
    int index = 0;
    AnglePair candidate;
    AnglePair measured_peak;
    double epsilon_deg = 0.0;
};

struct FaEstimate {
    std::vector<AnglePair> estimates;
    std::vector<ConfigScore> scores;  // all configurations, trajectory order
    AnglePair virtual_angle;
};

inline double angle_pair_error_deg(AnglePair a, AnglePair b) {
    const double dt = a.theta_deg - b.theta_deg;
    const double dp = a.phi_deg - b.phi_deg;
    return std::sqrt((dt * dt + dp * dp) / 2.0);
}

// One trajectory entry per non-singular candidate, in grid order. Candidates
// whose displacement solve is singular are skipped.
inline std::vector<TrajectoryEntry> build_trajectory(
    const std::vector<AnglePair>& search_grid, AnglePair virtual_angle,
    const ArrayGeometry& geometry, const FaSearchParams& params = {}) {
    if (search_grid.empty())
        throw EmptyTrajectory("build_trajectory: empty search grid");
    if (virtual_angle.theta_deg > params.max_virtual_deg ||
        virtual_angle.phi_deg > params.max_virtual_deg)
        throw std::invalid_argument(
            "build_trajectory: virtual angle must stay outside the end-fire region");

    std::vector<TrajectoryEntry> trajectory;
    trajectory.reserve(search_grid.size());
    int k = 0;
    for (const AnglePair& candidate : search_grid) {
        try {
            Vec dy = solve_y_displacements(candidate, virtual_angle, geometry,
                                           params.singular_tol);
            trajectory.push_back({candidate, std::move(dy), k++});
        } catch (const SingularTrueAngle&) {
            // singular candidate, no finite displacement exists
        }
    }
    if (trajectory.empty())
        throw EmptyTrajectory("build_trajectory: all candidates singular");
    return trajectory;
}

namespace detail {

struct VirtualSearchCache {
    std::vector<double> thetas;
    std::vector<double> phis;
    CMat steering_cols;  // virtual-domain UPA steering over the stage-1 grid
};

template <typename SteeringFn>
VirtualSearchCache make_virtual_search_cache(AnglePair virtual_angle,
                                             const FaSearchParams& params,
                                             int num_elements,
                                             SteeringFn&& upa_fn) {
    VirtualSearchCache cache;
    cache.thetas = local_axis(virtual_angle.theta_deg, params.verify_radius_deg,
                              params.verify_step_deg, params.domain);
    cache.phis = local_axis(virtual_angle.phi_deg, params.verify_radius_deg,
                            params.verify_step_deg, params.domain);
    cache.steering_cols.resize(num_elements,
                               static_cast<Eigen::Index>(cache.thetas.size() *
                                                         cache.phis.size()));
    Eigen::Index c = 0;
    for (double th : cache.thetas)
        for (double ph : cache.phis)
            cache.steering_cols.col(c++) = upa_fn(AnglePair{th, ph});
    return cache;
}

template <typename SteeringFn>
Peak measure_virtual_peak(const CMat& noise_basis, const VirtualSearchCache& cache,
                          const FaSearchParams& params, SteeringFn&& upa_fn) {
    const Vec values = music_values(noise_basis, cache.steering_cols);
    Peak stage1{{cache.thetas.front(), cache.phis.front()}, values(0)};
    Eigen::Index c = 0;
    for (double th : cache.thetas) {
        for (double ph : cache.phis) {
            if (values(c) > stage1.value)
                stage1 = Peak{{th, ph}, values(c)};
            ++c;
        }
    }
    return local_peak_search(noise_basis, stage1.angle, params.zoom_radius_deg,
                             params.zoom_step_deg, upa_fn, params.domain);
}

// Greedy pick of the requested number of candidates in ascending
// (epsilon, index) order, rejecting candidates closer than the separation
// limit (Chebyshev distance) to an already chosen one. If the constraint
// leaves slots unfilled, the best remaining candidates fill them regardless
// of separation.
inline std::vector<int> select_candidates(const std::vector<ConfigScore>& scores,
                                          const std::vector<TrajectoryEntry>& trajectory,
                                          int count, double min_separation_deg) {
    std::vector<int> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (scores[a].epsilon_deg != scores[b].epsilon_deg)
            return scores[a].epsilon_deg < scores[b].epsilon_deg;
        return scores[a].index < scores[b].index;
    });

    std::vector<int> chosen;
    auto conflicts = [&](int i) {
        const AnglePair& c = trajectory[i].candidate_true_angle;
        for (int j : chosen) {
            const AnglePair& o = trajectory[j].candidate_true_angle;
            const double cheb = std::max(std::abs(c.theta_deg - o.theta_deg),
                                         std::abs(c.phi_deg - o.phi_deg));
            if (cheb <= min_separation_deg) return true;
        }
        return false;
    };
    for (int i : order) {
        if (static_cast<int>(chosen.size()) == count) break;
        if (!conflicts(i)) chosen.push_back(i);
    }
    if (static_cast<int>(chosen.size()) < count) {
        for (int i : order) {
            if (static_cast<int>(chosen.size()) == count) break;
            if (std::find(chosen.begin(), chosen.end(), i) == chosen.end())
                chosen.push_back(i);
        }
    }
    return chosen;
}

}  // namespace detail

// Runs the candidate trajectory: for each configuration the array is
// displaced, fresh snapshots are acquired, and the spatial spectrum is
// searched near the virtual angle using the zero-displacement planar
// manifold. Candidates whose measured peak lands closest to the virtual
// angle become the estimates.
//
// Configuration k draws its snapshots from substream (scenario.seed, k+1);
// substream (scenario.seed, 0) is reserved for the planar prescan
// acquisition so the two never collide.
inline FaEstimate estimate_fa_doa(const SourceScenario& scenario,
                                  const ArrayGeometry& geometry,
                                  AnglePair virtual_angle,
                                  const std::vector<AnglePair>& search_grid,
                                  const FaSearchParams& params = {},
                                  int select_count = -1) {
    geometry.validate();
    scenario.validate(geometry.size());
    if (select_count < 0) select_count = scenario.num_sources();

    const std::vector<TrajectoryEntry> trajectory =
        build_trajectory(search_grid, virtual_angle, geometry, params);

    const auto upa_fn = make_upa_steering_fn(geometry);
    const detail::VirtualSearchCache cache = detail::make_virtual_search_cache(
        virtual_angle, params, geometry.size(), upa_fn);

    std::vector<ConfigScore> scores;
    scores.reserve(trajectory.size());
    for (const TrajectoryEntry& entry : trajectory) {
        const ArrayGeometry configured = geometry.with_displacements(entry.y_displacements);
        const CMat manifold = steering_matrix(scenario.sources, configured);
        SourceScenario acquisition = scenario;
        acquisition.seed = substream_seed(
            scenario.seed, {static_cast<std::uint64_t>(entry.index) + 1});
        const SnapshotMatrix y = generate_snapshots(manifold, acquisition);
        const SubspaceDecomposition sub =
            subspace_split(sample_covariance(y), scenario.num_sources());
        const Peak peak = detail::measure_virtual_peak(sub.noise_basis, cache,
                                                       params, upa_fn);
        scores.push_back({entry.index, entry.candidate_true_angle, peak.angle,
                          angle_pair_error_deg(peak.angle, virtual_angle)});
    }

    const std::vector<int> chosen = detail::select_candidates(
        scores, trajectory, std::min<int>(select_count, static_cast<int>(scores.size())),
        params.min_separation_deg);

    FaEstimate out;
    out.virtual_angle = virtual_angle;
    out.scores = std::move(scores);
    for (int i : chosen)
        out.estimates.push_back(trajectory[i].candidate_true_angle);
    return out;
}

struct PrescanPeak {
    AnglePair angle;
    bool end_fire = false;
};

// Conventional planar-array MUSIC over the full domain; peaks with theta or
// phi at or beyond the end-fire threshold are flagged for the
// reconfiguration pipeline.
inline std::vector<PrescanPeak> coarse_prescan(const SnapshotMatrix& y_upa,
                                               const ArrayGeometry& geometry,
                                               int num_sources,
                                               const FaSearchParams& params = {}) {
    if (num_sources < 1)
        throw std::invalid_argument("coarse_prescan: need at least one source");
    const SubspaceDecomposition sub =
        subspace_split(sample_covariance(y_upa), num_sources);
    const Vec grid = angle_grid(params.domain.lo_deg, params.domain.hi_deg,
                                params.global_grid_step_deg);
    const auto upa_fn = make_upa_steering_fn(geometry);
    const SpatialSpectrum spectrum = music_spectrum(sub.noise_basis, grid, grid, upa_fn);
    const PeakList peaks = find_top_peaks(spectrum, num_sources);

    std::vector<PrescanPeak> out;
    out.reserve(peaks.peaks.size());
    for (const Peak& p : peaks.peaks)
        out.push_back({p.angle, p.angle.theta_deg >= params.end_fire_threshold_deg ||
                                    p.angle.phi_deg >= params.end_fire_threshold_deg});
    return out;
}

// Candidate grid for the trajectory: the union of square windows around the
// flagged prescan peaks, snapped to the step lattice so overlapping windows
// deduplicate exactly. Ascending theta-major order.
inline std::vector<AnglePair> make_candidate_grid(const std::vector<PrescanPeak>& peaks,
                                                  const FaSearchParams& params = {}) {
    const double step = params.candidate_step_deg;
    const long half = std::lround(params.candidate_window_deg / step);
    std::set<std::pair<long, long>> lattice;
    for (const PrescanPeak& p : peaks) {
        if (!p.end_fire) continue;
        const long ct = std::lround(p.angle.theta_deg / step);
        const long cp = std::lround(p.angle.phi_deg / step);
        for (long it = ct - half; it <= ct + half; ++it) {
            const double th = it * step;
            if (!params.domain.contains(th)) continue;
            for (long ip = cp - half; ip <= cp + half; ++ip) {
                const double ph = ip * step;
                if (params.domain.contains(ph)) lattice.insert({it, ip});
            }
        }
    }
    std::vector<AnglePair> grid;
    grid.reserve(lattice.size());
    for (const auto& [it, ip] : lattice)
        grid.push_back({it * step, ip * step});
    return grid;
}

// Full estimation flow for one acquisition budget: planar prescan, then the
// reconfiguration pipeline for end-fire peaks while benign peaks keep their
// locally refined conventional estimates.
inline std::vector<AnglePair> fa_method_trial(const SourceScenario& scenario,
                                              const ArrayGeometry& geometry,
                                              AnglePair virtual_angle,
                                              const FaSearchParams& params = {}) {
    geometry.validate();
    scenario.validate(geometry.size());

    const CMat manifold = steering_matrix(scenario.sources, geometry);
    SourceScenario prescan_acq = scenario;
    prescan_acq.seed = substream_seed(scenario.seed, {0});
    const SnapshotMatrix y_upa = generate_snapshots(manifold, prescan_acq);

    const std::vector<PrescanPeak> peaks =
        coarse_prescan(y_upa, geometry, scenario.num_sources(), params);

    std::vector<AnglePair> estimates;
    int flagged = 0;
    for (const PrescanPeak& p : peaks)
        if (p.end_fire) ++flagged;

    if (flagged < scenario.num_sources()) {
        const SubspaceDecomposition sub =
            subspace_split(sample_covariance(y_upa), scenario.num_sources());
        const auto upa_fn = make_upa_steering_fn(geometry);
        for (const PrescanPeak& p : peaks) {
            if (p.end_fire) continue;
            const Peak refined =
                local_peak_search(sub.noise_basis, p.angle, params.refine_radius_deg,
                                  params.refine_step_deg, upa_fn, params.domain);
            estimates.push_back(refined.angle);
        }
    }

    if (flagged > 0) {
        const std::vector<AnglePair> grid = make_candidate_grid(peaks, params);
        const FaEstimate fa =
            estimate_fa_doa(scenario, geometry, virtual_angle, grid, params, flagged);
        estimates.insert(estimates.end(), fa.estimates.begin(), fa.estimates.end());
    }
    return estimates;
}

}  // namespace fadoa
