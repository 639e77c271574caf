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

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "fadoa/baselines.hpp"
#include "fadoa/pipeline.hpp"
#include "oracles.hpp"

using namespace fadoa;

namespace {

SnapshotMatrix make_data(const std::vector<AnglePair>& sources, double snr_db,
                         int snapshots, std::uint64_t seed, const ArrayGeometry& g,
                         double noise_scale = 1.0) {
    SourceScenario scenario;
    scenario.sources = sources;
    scenario.snr_db = snr_db;
    scenario.snapshots = snapshots;
    scenario.seed = seed;
    scenario.noise_scale = noise_scale;
    return generate_snapshots(steering_matrix(sources, g), scenario);
}

double single_error(const BaselineResult& r, AnglePair truth) {
    return angle_pair_error_deg(r.estimates.at(0), truth);
}

}  // namespace

TEST_CASE("grid MUSIC recovers an on-grid source exactly", "[baselines]") {
    const ArrayGeometry g = ArrayGeometry::upa(8, 8);
    const AnglePair truth{30.0, 30.0};
    const SnapshotMatrix y = make_data({truth}, 10.0, 64, 1, g, 0.0);
    const BaselineResult r = music2d_upa(y, g, 1);
    REQUIRE(r.estimates.size() == 1);
    REQUIRE(r.estimates[0] == truth);
    REQUIRE_FALSE(r.clipped);
}

TEST_CASE("grid MUSIC degrades toward end-fire", "[baselines]") {
    const ArrayGeometry g = ArrayGeometry::upa(8, 8);
    double benign_sq = 0.0, end_fire_sq = 0.0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t seed = substream_seed(616161, {static_cast<std::uint64_t>(t)});
        const SnapshotMatrix yb = make_data({{30.0, 30.0}}, 10.0, 500, seed, g);
        const SnapshotMatrix ye = make_data({{86.0, 86.0}}, 10.0, 500, seed, g);
        const double eb = single_error(music2d_upa(yb, g, 1), {30.0, 30.0});
        const double ee = single_error(music2d_upa(ye, g, 1), {86.0, 86.0});
        benign_sq += eb * eb;
        end_fire_sq += ee * ee;
    }
    REQUIRE(end_fire_sq > benign_sq);
}

TEST_CASE("baselines reject displaced geometries", "[baselines]") {
    const ArrayGeometry flat = ArrayGeometry::upa(4, 4);
    const ArrayGeometry displaced = flat.with_displacements(Vec::Ones(16));
    const SnapshotMatrix y = make_data({{30.0, 30.0}}, 10.0, 32, 2, flat);
    REQUIRE_THROWS_AS(music2d_upa(y, displaced, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(esprit2d_upa(y, displaced, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(
        omp_2d(y, displaced, 1, angle_grid(0, 90, 1), angle_grid(0, 90, 1)),
        std::invalid_argument);
}

TEST_CASE("shift-invariance estimator is exact without noise", "[baselines]") {
    const ArrayGeometry g = ArrayGeometry::upa(8, 8);
    const AnglePair truth{40.0, 35.0};
    const SnapshotMatrix y = make_data({truth}, 10.0, 16, 3, g, 0.0);
    const BaselineResult r = esprit2d_upa(y, g, 1);
    REQUIRE(r.estimates.size() == 1);
    REQUIRE(std::abs(r.estimates[0].theta_deg - truth.theta_deg) < 1e-6);
    REQUIRE(std::abs(r.estimates[0].phi_deg - truth.phi_deg) < 1e-6);
    REQUIRE_FALSE(r.clipped);
}

TEST_CASE("shift-invariance estimator resolves two noiseless sources", "[baselines]") {
    const ArrayGeometry g = ArrayGeometry::upa(8, 8);
    const std::vector<AnglePair> sources{{25.0, 40.0}, {55.0, 15.0}};
    const SnapshotMatrix y = make_data(sources, 10.0, 32, 4, g, 0.0);
    const BaselineResult r = esprit2d_upa(y, g, 2);
    REQUIRE(r.estimates.size() == 2);
    std::vector<AnglePair> est = r.estimates;
    std::sort(est.begin(), est.end(),
              [](AnglePair a, AnglePair b) { return a.theta_deg < b.theta_deg; });
    REQUIRE(std::abs(est[0].theta_deg - 25.0) < 1e-5);
    REQUIRE(std::abs(est[0].phi_deg - 40.0) < 1e-5);
    REQUIRE(std::abs(est[1].theta_deg - 55.0) < 1e-5);
    REQUIRE(std::abs(est[1].phi_deg - 15.0) < 1e-5);
}

TEST_CASE("shift-invariance estimator tracks grid MUSIC", "[baselines]") {
    const ArrayGeometry g = ArrayGeometry::upa(8, 8);
    const AnglePair truth{30.0, 30.0};
    double music_sq = 0.0, esprit_sq = 0.0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
        const SnapshotMatrix y = make_data(
            {truth}, 10.0, 500, substream_seed(626262, {static_cast<std::uint64_t>(t)}), g);
        const double em = single_error(music2d_upa(y, g, 1), truth);
        const double ee = single_error(esprit2d_upa(y, g, 1), truth);
        music_sq += em * em;
        esprit_sq += ee * ee;
    }
    const double music_rmse = std::sqrt(music_sq / trials);
    const double esprit_rmse = std::sqrt(esprit_sq / trials);
    REQUIRE(esprit_rmse <= 2.0 * music_rmse + 1e-12);
}

TEST_CASE("estimators agree at high SNR on a benign source", "[baselines]") {
    const ArrayGeometry g = ArrayGeometry::upa(8, 8);
    const AnglePair truth{33.0, 28.0};
    for (int t = 0; t < 5; ++t) {
        const SnapshotMatrix y = make_data(
            {truth}, 20.0, 500, substream_seed(636363, {static_cast<std::uint64_t>(t)}), g);
        const AnglePair em = music2d_upa(y, g, 1).estimates[0];
        const AnglePair ee = esprit2d_upa(y, g, 1).estimates[0];
        REQUIRE(std::abs(em.theta_deg - ee.theta_deg) < 0.2);
        REQUIRE(std::abs(em.phi_deg - ee.phi_deg) < 0.2);
    }
}

TEST_CASE("shift-invariance estimator preconditions", "[baselines]") {
    const ArrayGeometry line = ArrayGeometry::upa(8, 1);
    const SnapshotMatrix y = make_data({{30.0, 30.0}}, 10.0, 32, 5, line);
    REQUIRE_THROWS_AS(esprit2d_upa(y, line, 1), std::invalid_argument);
}

TEST_CASE("greedy dictionary search picks the exact atom first", "[baselines]") {
    const ArrayGeometry g = ArrayGeometry::upa(8, 8);
    const AnglePair truth{30.0, 30.0};
    const SnapshotMatrix y = make_data({truth}, 10.0, 64, 6, g, 0.0);
    const Vec grid = angle_grid(0.0, 90.0, 1.0);
    const BaselineResult r = omp_2d(y, g, 1, grid, grid);
    REQUIRE(r.estimates.size() == 1);
    REQUIRE(r.estimates[0] == truth);
}

TEST_CASE("greedy dictionary search resolves orthogonal atoms", "[baselines]") {
    const ArrayGeometry g = ArrayGeometry::upa(2, 2);
    const std::vector<AnglePair> sources{{0.0, 0.0}, {90.0, 0.0}};
    const SnapshotMatrix y = make_data(sources, 10.0, 32, 7, g, 0.0);
    const Vec theta_grid = angle_grid(0.0, 90.0, 45.0);
    const Vec phi_grid = angle_grid(0.0, 0.0, 1.0);
    const BaselineResult r = omp_2d(y, g, 2, theta_grid, phi_grid);
    REQUIRE(r.estimates.size() == 2);
    std::vector<double> thetas{r.estimates[0].theta_deg, r.estimates[1].theta_deg};
    std::sort(thetas.begin(), thetas.end());
    REQUIRE(thetas[0] == 0.0);
    REQUIRE(thetas[1] == 90.0);
}

TEST_CASE("greedy dictionary search first atom maximizes correlation", "[baselines]") {
    const ArrayGeometry g = ArrayGeometry::upa(6, 6);
    const SnapshotMatrix y = make_data({{47.0, 36.0}}, 5.0, 200, 8, g);
    const Vec grid = angle_grid(0.0, 90.0, 3.0);
    const BaselineResult r = omp_2d(y, g, 1, grid, grid);

    const SubspaceDecomposition d = subspace_split(sample_covariance(y), 1);
    const CVec target = d.signal_basis.col(0) * std::sqrt(d.eigenvalues(0));
    double best = -1.0;
    AnglePair best_angle{0.0, 0.0};
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        for (Eigen::Index j = 0; j < grid.size(); ++j) {
            const SteeringVector atom =
                steering_upa({grid(i), grid(j)}, g).normalized();
            const double corr = std::abs(atom.dot(target));
            if (corr > best) {
                best = corr;
                best_angle = {grid(i), grid(j)};
            }
        }
    }
    REQUIRE(r.estimates[0] == best_angle);
}

TEST_CASE("error bound decreases with SNR", "[baselines]") {
    const ArrayGeometry g = ArrayGeometry::upa(8, 8);
    SourceScenario scenario;
    scenario.sources = {{30.0, 30.0}};
    scenario.snapshots = 500;
    double previous = std::numeric_limits<double>::infinity();
    for (double snr = -10.0; snr <= 20.0; snr += 5.0) {
        scenario.snr_db = snr;
        const double bound = crlb_rmse(scenario, g);
        REQUIRE(bound > 0.0);
        REQUIRE(bound < previous);
        previous = bound;
    }
}

TEST_CASE("error bound halves when snapshots quadruple", "[baselines]") {
    const ArrayGeometry g = ArrayGeometry::upa(8, 8);
    SourceScenario scenario;
    scenario.sources = {{30.0, 30.0}};
    scenario.snr_db = 10.0;
    scenario.snapshots = 250;
    const double at_t = crlb_rmse(scenario, g);
    scenario.snapshots = 1000;
    const double at_4t = crlb_rmse(scenario, g);
    REQUIRE(at_t / at_4t == Catch::Approx(2.0).epsilon(0.01));
}

TEST_CASE("error bound reference values", "[baselines]") {
    const ArrayGeometry g = ArrayGeometry::upa(8, 8);
    SourceScenario scenario;
    scenario.sources = {{30.0, 30.0}};
    scenario.snr_db = 10.0;
    scenario.snapshots = 500;
    REQUIRE(crlb_rmse(scenario, g) == Catch::Approx(0.01991).epsilon(0.01));
    scenario.sources = {{86.0, 86.0}};
    REQUIRE(crlb_rmse(scenario, g) == Catch::Approx(0.17497).epsilon(0.01));
    scenario.snr_db = -10.0;
    scenario.sources = {{30.0, 30.0}};
    REQUIRE(crlb_rmse(scenario, g) == Catch::Approx(0.21397).epsilon(0.01));
}

TEST_CASE("error bound input validation", "[baselines]") {
    const ArrayGeometry g = ArrayGeometry::upa(8, 8);
    SourceScenario scenario;
    scenario.sources = {{30.0, 30.0}};
    scenario.noise_scale = 0.0;
    REQUIRE_THROWS_AS(crlb_rmse(scenario, g), std::invalid_argument);
}

TEST_CASE("analytic steering derivatives match finite differences", "[baselines]") {
    std::vector<double> dy_std(16);
    Vec dy(16);
    std::mt19937 rng(909);
    std::uniform_real_distribution<double> disp(-1.5, 1.5);
    for (int i = 0; i < 16; ++i) {
        dy(i) = disp(rng);
        dy_std[static_cast<std::size_t>(i)] = dy(i);
    }
    const ArrayGeometry g = ArrayGeometry::upa(4, 4).with_displacements(dy);

    std::uniform_real_distribution<double> ang(5.0, 85.0);
    for (int rep = 0; rep < 20; ++rep) {
        const double th = ang(rng), ph = ang(rng);
        const SteeringDerivatives sd = steering_derivatives({th, ph}, g);
        const auto fd_theta =
            oracle::steering_derivative(4, 4, dy_std, th, ph, 0.5, 1.0, true);
        const auto fd_phi =
            oracle::steering_derivative(4, 4, dy_std, th, ph, 0.5, 1.0, false);
        for (int i = 0; i < 16; ++i) {
            const auto si = static_cast<std::size_t>(i);
            REQUIRE(std::abs(sd.d_theta(i) - fd_theta[si]) <
                    1e-6 * std::max(1.0, std::abs(fd_theta[si])));
            REQUIRE(std::abs(sd.d_phi(i) - fd_phi[si]) <
                    1e-6 * std::max(1.0, std::abs(fd_phi[si])));
        }
    }
}
