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
#include <numeric>
#include <vector>

#include "fadoa/errors.hpp"
#include "fadoa/signal_sim.hpp"
#include "fadoa/steering.hpp"
#include "fadoa/subspace.hpp"
#include "fadoa/types.hpp"

namespace fadoa {

enum class BaselineMethod { Music2D, Esprit2D, Omp };

struct BaselineResult {
    BaselineMethod method;
    std::vector<AnglePair> estimates;
    bool clipped = false;  // some estimate mapped outside the domain and was clipped
};

namespace detail {

inline void require_planar(const ArrayGeometry& geometry, const char* who) {
    if (geometry.has_displacements() && !geometry.y_displacements.isZero(0.0))
        throw std::invalid_argument(std::string(who) +
                                    ": expects the zero-displacement planar array");
}

}  // namespace detail

struct Music2dParams {
    double grid_step_deg = 1.0;
    bool refine = true;
    double refine_radius_deg = 2.0;
    double refine_step_deg = 0.1;
    AngleDomain domain{};
};

// Conventional planar-array MUSIC: full-domain grid search for the strongest
// peaks, optionally followed by a finer local search at each peak.
inline BaselineResult music2d_upa(const SnapshotMatrix& y, const ArrayGeometry& geometry,
                                  int num_sources, const Music2dParams& params = {}) {
    detail::require_planar(geometry, "music2d_upa");
    const SubspaceDecomposition sub =
        subspace_split(sample_covariance(y), num_sources);
    const Vec grid = angle_grid(params.domain.lo_deg, params.domain.hi_deg,
                                params.grid_step_deg);
    const auto upa_fn = make_upa_steering_fn(geometry);
    const SpatialSpectrum spectrum = music_spectrum(sub.noise_basis, grid, grid, upa_fn);
    const PeakList peaks = find_top_peaks(spectrum, num_sources);

    BaselineResult out{BaselineMethod::Music2D, {}, false};
    for (const Peak& p : peaks.peaks) {
        if (params.refine) {
            const Peak refined =
                local_peak_search(sub.noise_basis, p.angle, params.refine_radius_deg,
                                  params.refine_step_deg, upa_fn, params.domain);
            out.estimates.push_back(refined.angle);
        } else {
            out.estimates.push_back(p.angle);
        }
    }
    return out;
}

namespace detail {

// Rows of the signal subspace belonging to a subarray: keep elements whose
// x (or z) index lies in [lo, n_axis - 1 + lo - shift] ... concretely, the
// two x-subarrays drop the last/first x-plane, the z-subarrays the last/first
// z-column, preserving x-major element order.
inline CMat subarray_rows(const CMat& m, const ArrayGeometry& g, bool x_axis, bool second) {
    const int keep_count = x_axis ? (g.n_x - 1) * g.n_z : g.n_x * (g.n_z - 1);
    CMat out(keep_count, m.cols());
    int r = 0;
    for (int ix = 0; ix < g.n_x; ++ix) {
        for (int iz = 0; iz < g.n_z; ++iz) {
            const int axis_idx = x_axis ? ix : iz;
            const int axis_len = x_axis ? g.n_x : g.n_z;
            if (!second && axis_idx >= axis_len - 1) continue;
            if (second && axis_idx < 1) continue;
            out.row(r++) = m.row(ix * g.n_z + iz);
        }
    }
    return out;
}

// Least-squares rotation operator Psi = pinv(S1) * S2 for one axis.
inline CMat axis_rotation(const CMat& us, const ArrayGeometry& g, bool x_axis) {
    const CMat s1 = subarray_rows(us, g, x_axis, false);
    const CMat s2 = subarray_rows(us, g, x_axis, true);
    Eigen::ColPivHouseholderQR<CMat> qr(s1);
    if (qr.rank() < us.cols())
        throw RankDeficient("esprit2d_upa: subarray signal subspace is rank deficient");
    return qr.solve(s2);
}

inline double wrap_frequency(double arg_rad, double spacing, double wavelength) {
    return arg_rad * wavelength / (2.0 * pi * spacing);
}

}  // namespace detail

// Shift-invariance estimator on the planar array. The x- and z-axis
// rotations share eigenvectors, so diagonalizing the x rotation and applying
// its eigenbasis to the z rotation pairs the two spatial frequencies per
// source; if that transform is far from diagonal (near-equal x frequencies)
// an exhaustive eigenvector-correlation pairing takes over.
inline BaselineResult esprit2d_upa(const SnapshotMatrix& y, const ArrayGeometry& geometry,
                                   int num_sources) {
    detail::require_planar(geometry, "esprit2d_upa");
    if (geometry.n_x < 2 || geometry.n_z < 2)
        throw std::invalid_argument("esprit2d_upa: needs n_x >= 2 and n_z >= 2");
    const SubspaceDecomposition sub =
        subspace_split(sample_covariance(y), num_sources);

    const CMat psi_x = detail::axis_rotation(sub.signal_basis, geometry, true);
    const CMat psi_z = detail::axis_rotation(sub.signal_basis, geometry, false);

    Eigen::ComplexEigenSolver<CMat> eig_x(psi_x);
    if (eig_x.info() != Eigen::Success)
        throw RankDeficient("esprit2d_upa: x-axis rotation eigendecomposition failed");
    const CVec lambda_x = eig_x.eigenvalues();
    const CMat ex = eig_x.eigenvectors();

    // z eigenvalues in x-eigenvector order
    CVec lambda_z(num_sources);
    const CMat m = ex.fullPivLu().solve(psi_z * ex);
    double off = 0.0, diag = 0.0;
    for (int i = 0; i < num_sources; ++i) {
        for (int j = 0; j < num_sources; ++j) {
            const double a = std::abs(m(i, j));
            if (i == j) diag += a; else off += a;
        }
        lambda_z(i) = m(i, i);
    }
    if (num_sources > 1 && off > 0.5 * diag) {
        Eigen::ComplexEigenSolver<CMat> eig_z(psi_z);
        if (eig_z.info() != Eigen::Success)
            throw RankDeficient("esprit2d_upa: z-axis rotation eigendecomposition failed");
        std::vector<int> perm(num_sources);
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<int> best = perm;
        double best_score = -1.0;
        do {
            double score = 0.0;
            for (int i = 0; i < num_sources; ++i)
                score += std::abs(ex.col(i).normalized().dot(
                    eig_z.eigenvectors().col(perm[i]).normalized()));
            if (score > best_score) {
                best_score = score;
                best = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        for (int i = 0; i < num_sources; ++i)
            lambda_z(i) = eig_z.eigenvalues()(best[i]);
    }

    BaselineResult out{BaselineMethod::Esprit2D, {}, false};
    for (int i = 0; i < num_sources; ++i) {
        double u = detail::wrap_frequency(std::arg(lambda_x(i)), geometry.spacing,
                                          geometry.wavelength);
        double v = detail::wrap_frequency(std::arg(lambda_z(i)), geometry.spacing,
                                          geometry.wavelength);
        if (u < -1.0 || u > 1.0 || v < 0.0 || v > 1.0) out.clipped = true;
        u = std::clamp(u, -1.0, 1.0);
        v = std::clamp(v, 0.0, 1.0);  // phi restricted to [0, 90] deg
        const double phi = std::asin(v);
        const double cos_phi = std::cos(phi);
        double cos_theta = cos_phi > 1e-12 ? u / cos_phi : 1.0;
        if (cos_theta < 0.0 || cos_theta > 1.0) out.clipped = true;
        cos_theta = std::clamp(cos_theta, 0.0, 1.0);
        out.estimates.push_back({rad2deg(std::acos(cos_theta)), rad2deg(phi)});
    }
    return out;
}

// Greedy sparse recovery against a planar-array dictionary. Works on the
// eigenvalue-weighted signal subspace rather than raw snapshots so a single
// pass covers the whole acquisition.
inline BaselineResult omp_2d(const SnapshotMatrix& y, const ArrayGeometry& geometry,
                             int num_sources, const Vec& theta_grid, const Vec& phi_grid) {
    detail::require_planar(geometry, "omp_2d");
    if (theta_grid.size() == 0 || phi_grid.size() == 0)
        throw std::invalid_argument("omp_2d: empty dictionary grid");
    const SubspaceDecomposition sub =
        subspace_split(sample_covariance(y), num_sources);

    CMat target = sub.signal_basis;
    for (int i = 0; i < num_sources; ++i)
        target.col(i) *= std::sqrt(std::max(sub.eigenvalues(i), 0.0));

    const Eigen::Index nt = theta_grid.size();
    const Eigen::Index np = phi_grid.size();
    const auto upa_fn = make_upa_steering_fn(geometry);
    CMat dict(geometry.size(), nt * np);
    for (Eigen::Index i = 0; i < nt; ++i)
        for (Eigen::Index j = 0; j < np; ++j)
            dict.col(i * np + j) =
                upa_fn(AnglePair{theta_grid(i), phi_grid(j)}).normalized();

    BaselineResult out{BaselineMethod::Omp, {}, false};
    std::vector<Eigen::Index> chosen;
    CMat residual = target;
    for (int pick = 0; pick < num_sources; ++pick) {
        const Mat corr = (dict.adjoint() * residual).cwiseAbs2().rowwise().sum();
        Eigen::Index best = -1;
        double best_val = -1.0;
        for (Eigen::Index a = 0; a < corr.rows(); ++a) {
            if (std::find(chosen.begin(), chosen.end(), a) != chosen.end()) continue;
            if (corr(a, 0) > best_val) {
                best_val = corr(a, 0);
                best = a;
            }
        }
        chosen.push_back(best);
        CMat atoms(dict.rows(), static_cast<Eigen::Index>(chosen.size()));
        for (std::size_t c = 0; c < chosen.size(); ++c)
            atoms.col(static_cast<Eigen::Index>(c)) = dict.col(chosen[c]);
        residual = target - atoms * atoms.colPivHouseholderQr().solve(target);
    }
    for (Eigen::Index a : chosen)
        out.estimates.push_back({theta_grid(a / np), phi_grid(a % np)});
    return out;
}

// Stochastic (Gaussian-source) lower bound on angular RMSE for unbiased
// estimators, reported in degrees with the same per-source averaging as the
// Monte Carlo RMSE metric:
//   F = (2T/sigma^2) Re[ (D^H P_A_perp D) .* (1_{2x2} kron (P A^H R^-1 A P)^T) ]
inline double crlb_rmse(const SourceScenario& scenario, const ArrayGeometry& geometry) {
    geometry.validate();
    scenario.validate(geometry.size());
    if (!(scenario.noise_scale > 0.0))
        throw std::invalid_argument("crlb_rmse: requires a positive noise level");

    const int n = geometry.size();
    const int num_src = scenario.num_sources();
    const double power = signal_power_for_snr(scenario.snr_db);
    const double sigma2 = scenario.noise_scale * scenario.noise_scale;
    const double t = static_cast<double>(scenario.snapshots);

    CMat a(n, num_src);
    CMat d(n, 2 * num_src);
    for (int l = 0; l < num_src; ++l) {
        const SteeringDerivatives sd = steering_derivatives(scenario.sources[l], geometry);
        a.col(l) = sd.a;
        d.col(l) = sd.d_theta;
        d.col(num_src + l) = sd.d_phi;
    }

    Eigen::ColPivHouseholderQR<CMat> qr_a(a);
    if (qr_a.rank() < num_src)
        throw RankDeficient("crlb_rmse: manifold matrix is rank deficient");
    const CMat proj_perp = CMat::Identity(n, n) - a * qr_a.solve(CMat::Identity(n, n));

    const CMat r = power * (a * a.adjoint()) + sigma2 * CMat::Identity(n, n);
    const CMat g = (power * power) * (a.adjoint() * r.llt().solve(a));

    const CMat h = d.adjoint() * proj_perp * d;
    const CMat gt = g.transpose();
    Mat fisher(2 * num_src, 2 * num_src);
    for (int bi = 0; bi < 2; ++bi)
        for (int bj = 0; bj < 2; ++bj)
            fisher.block(bi * num_src, bj * num_src, num_src, num_src) =
                (2.0 * t / sigma2) *
                h.block(bi * num_src, bj * num_src, num_src, num_src)
                    .cwiseProduct(gt)
                    .real();

    Eigen::FullPivLU<Mat> lu(fisher);
    if (!lu.isInvertible())
        throw SingularFisher("crlb_rmse: Fisher information matrix is singular");
    const Mat crb = lu.inverse();

    double acc = 0.0;
    for (int l = 0; l < num_src; ++l) {
        const double var_theta = crb(l, l);
        const double var_phi = crb(num_src + l, num_src + l);
        if (var_theta < 0.0 || var_phi < 0.0)
            throw SingularFisher("crlb_rmse: bound is not positive definite");
        acc += rad2deg(std::sqrt((var_theta + var_phi) / 2.0));
    }
    return acc / num_src;
}

}  // namespace fadoa
