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
#include <vector>

#include "fadoa/errors.hpp"
#include "fadoa/types.hpp"

namespace fadoa {

inline constexpr double music_denominator_floor = 1e-12;

// R = (1/T) Y Y^H, symmetrized so it is exactly Hermitian.
inline CMat sample_covariance(const SnapshotMatrix& y) {
    if (y.cols() < 1)
        throw std::invalid_argument("sample_covariance: need at least one snapshot");
    const double inv_t = 1.0 / static_cast<double>(y.cols());
    CMat r = CMat::Zero(y.rows(), y.rows());
    r.selfadjointView<Eigen::Lower>().rankUpdate(y, inv_t);
    r = r.selfadjointView<Eigen::Lower>();
    r = 0.5 * (r + r.adjoint()).eval();
    return r;
}

// Eigenpairs of a Hermitian covariance split into signal (L largest) and
// noise (remaining) subspaces. Eigenvalues are sorted descending.
struct SubspaceDecomposition {
    Vec eigenvalues;
    CMat signal_basis;
    CMat noise_basis;
};

inline SubspaceDecomposition subspace_split(const CMat& r, int num_sources) {
    const int n = static_cast<int>(r.rows());
    if (num_sources < 1 || num_sources >= n)
        throw DegenerateSubspace("subspace_split: need 1 <= L < N, got L=" +
                                 std::to_string(num_sources) + " N=" + std::to_string(n));
    Eigen::SelfAdjointEigenSolver<CMat> solver(r);
    if (solver.info() != Eigen::Success)
        throw DegenerateSubspace("subspace_split: eigendecomposition failed");

    SubspaceDecomposition d;
    d.eigenvalues = solver.eigenvalues().reverse();
    const CMat vectors = solver.eigenvectors().rowwise().reverse();
    d.signal_basis = vectors.leftCols(num_sources);
    d.noise_basis = vectors.rightCols(n - num_sources);
    return d;
}

// Pseudospectrum values 1 / ||Un^H a||^2 for a batch of steering columns,
// with the denominator floored to keep exact nulls finite.
inline Vec music_values(const CMat& noise_basis, const CMat& steering_cols) {
    const CMat w = noise_basis.adjoint() * steering_cols;
    Vec out(steering_cols.cols());
    for (Eigen::Index c = 0; c < w.cols(); ++c)
        out(c) = 1.0 / std::max(w.col(c).squaredNorm(), music_denominator_floor);
    return out;
}

inline double music_value(const CMat& noise_basis, const SteeringVector& a) {
    return 1.0 / std::max((noise_basis.adjoint() * a).squaredNorm(),
                          music_denominator_floor);
}

// Pseudospectrum sampled on a rectangular theta x phi grid (degrees).
struct SpatialSpectrum {
    Vec theta_grid;
    Vec phi_grid;
    Mat values;  // |theta| x |phi|, strictly positive
};

// Inclusive uniform grid lo..hi; hi is kept when it lands on a step.
inline Vec angle_grid(double lo_deg, double hi_deg, double step_deg) {
    if (!(step_deg > 0.0))
        throw std::invalid_argument("angle_grid: step must be positive");
    const int count = static_cast<int>(std::floor((hi_deg - lo_deg) / step_deg + 1e-9)) + 1;
    Vec g(std::max(count, 1));
    for (int i = 0; i < g.size(); ++i)
        g(i) = lo_deg + i * step_deg;
    return g;
}

template <typename SteeringFn>
SpatialSpectrum music_spectrum(const CMat& noise_basis, const Vec& theta_grid,
                               const Vec& phi_grid, SteeringFn&& steering_fn) {
    if (theta_grid.size() == 0 || phi_grid.size() == 0)
        throw std::invalid_argument("music_spectrum: empty grid");
    const Eigen::Index nt = theta_grid.size();
    const Eigen::Index np = phi_grid.size();
    const Eigen::Index n = noise_basis.rows();

    CMat cols(n, nt * np);
    for (Eigen::Index i = 0; i < nt; ++i)
        for (Eigen::Index j = 0; j < np; ++j)
            cols.col(i * np + j) = steering_fn(AnglePair{theta_grid(i), phi_grid(j)});

    const Vec flat = music_values(noise_basis, cols);
    SpatialSpectrum s{theta_grid, phi_grid, Mat(nt, np)};
    for (Eigen::Index i = 0; i < nt; ++i)
        for (Eigen::Index j = 0; j < np; ++j)
            s.values(i, j) = flat(i * np + j);
    return s;
}

struct Peak {
    AnglePair angle;
    double value = 0.0;
};

struct PeakList {
    std::vector<Peak> peaks;
    bool degenerate = false;  // padded with non-maximum grid values
};

namespace detail {

// Ordering for peak lists: larger value first, then smaller theta, then phi.
inline bool peak_before(const Peak& a, const Peak& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.angle.theta_deg != b.angle.theta_deg) return a.angle.theta_deg < b.angle.theta_deg;
    return a.angle.phi_deg < b.angle.phi_deg;
}

}  // namespace detail

// The count strongest strict local maxima (8-neighborhood). If the spectrum
// has fewer strict maxima than requested, the strongest remaining grid cells
// fill the gap and the result is flagged degenerate.
inline PeakList find_top_peaks(const SpatialSpectrum& spectrum, int count) {
    if (count < 1)
        throw std::invalid_argument("find_top_peaks: count must be >= 1");
    const Eigen::Index nt = spectrum.values.rows();
    const Eigen::Index np = spectrum.values.cols();

    std::vector<Peak> maxima;
    std::vector<Peak> rest;
    for (Eigen::Index i = 0; i < nt; ++i) {
        for (Eigen::Index j = 0; j < np; ++j) {
            const double v = spectrum.values(i, j);
            bool is_max = true;
            for (Eigen::Index di = -1; di <= 1 && is_max; ++di) {
                for (Eigen::Index dj = -1; dj <= 1 && is_max; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const Eigen::Index ni = i + di, nj = j + dj;
                    if (ni < 0 || ni >= nt || nj < 0 || nj >= np) continue;
                    if (spectrum.values(ni, nj) >= v) is_max = false;
                }
            }
            const Peak p{{spectrum.theta_grid(i), spectrum.phi_grid(j)}, v};
            (is_max ? maxima : rest).push_back(p);
        }
    }
    std::sort(maxima.begin(), maxima.end(), detail::peak_before);

    PeakList out;
    for (const Peak& p : maxima) {
        if (static_cast<int>(out.peaks.size()) == count) break;
        out.peaks.push_back(p);
    }
    if (static_cast<int>(out.peaks.size()) < count) {
        out.degenerate = true;
        std::sort(rest.begin(), rest.end(), detail::peak_before);
        for (const Peak& p : rest) {
            if (static_cast<int>(out.peaks.size()) == count) break;
            out.peaks.push_back(p);
        }
    }
    return out;
}

namespace detail {

// Symmetric offsets center +/- i*step restricted to the domain, ascending.
inline std::vector<double> local_axis(double center, double radius, double step,
                                      const AngleDomain& domain) {
    const int m = static_cast<int>(std::floor(radius / step + 1e-9));
    std::vector<double> axis;
    axis.reserve(2 * m + 1);
    for (int i = -m; i <= m; ++i) {
        const double x = center + i * step;
        if (domain.contains(x)) axis.push_back(x);
    }
    if (axis.empty()) axis.push_back(domain.clip(center));
    return axis;
}

}  // namespace detail

// Argmax of the pseudospectrum over the square neighborhood center +/- radius,
// sampled at the given step and clipped to the domain. Tie-break matches the
// global grid search: smallest theta, then smallest phi.
template <typename SteeringFn>
Peak local_peak_search(const CMat& noise_basis, AnglePair center, double radius_deg,
                       double step_deg, SteeringFn&& steering_fn,
                       const AngleDomain& domain = {}) {
    if (!(radius_deg > 0.0) || !(step_deg > 0.0))
        throw std::invalid_argument("local_peak_search: radius and step must be positive");
    const std::vector<double> thetas =
        detail::local_axis(center.theta_deg, radius_deg, step_deg, domain);
    const std::vector<double> phis =
        detail::local_axis(center.phi_deg, radius_deg, step_deg, domain);

    CMat cols(noise_basis.rows(),
              static_cast<Eigen::Index>(thetas.size() * phis.size()));
    Eigen::Index c = 0;
    for (double th : thetas)
        for (double ph : phis)
            cols.col(c++) = steering_fn(AnglePair{th, ph});

    const Vec values = music_values(noise_basis, cols);
    Peak best{{thetas.front(), phis.front()}, values(0)};
    c = 0;
    for (double th : thetas) {
        for (double ph : phis) {
            if (values(c) > best.value)
                best = Peak{{th, ph}, values(c)};
            ++c;
        }
    }
    return best;
}

}  // namespace fadoa
