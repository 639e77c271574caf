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

// Deliberately naive reference implementations, written independently of the
// library internals (scalar loops, no Eigen expressions) so the two sides
// can disagree.

#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "fadoa/types.hpp"

namespace oracle {

using fadoa::cplx;

// Per-element phase accumulated term by term from the element indices.
inline cplx element_response(int ix, int iz, double dy, double theta_deg,
                             double phi_deg, double spacing, double wavelength) {
    const double th = theta_deg * M_PI / 180.0;
    const double ph = phi_deg * M_PI / 180.0;
    const double dx = spacing * ix;
    const double dz = spacing * iz;
    double phase = 0.0;
    phase += dx * std::cos(th) * std::cos(ph);
    phase += dz * std::sin(ph);
    phase += dy * std::sin(th) * std::cos(ph);
    phase *= 2.0 * M_PI / wavelength;
    return {std::cos(phase), std::sin(phase)};
}

inline std::vector<cplx> steering(int n_x, int n_z, const std::vector<double>& dy,
                                  double theta_deg, double phi_deg, double spacing,
                                  double wavelength) {
    std::vector<cplx> out;
    for (int ix = 0; ix < n_x; ++ix)
        for (int iz = 0; iz < n_z; ++iz) {
            const double d = dy.empty() ? 0.0 : dy[ix * n_z + iz];
            out.push_back(element_response(ix, iz, d, theta_deg, phi_deg, spacing,
                                           wavelength));
        }
    return out;
}

// Naive summation form of the sample covariance.
inline fadoa::CMat covariance(const fadoa::CMat& y) {
    const int n = static_cast<int>(y.rows());
    const int t = static_cast<int>(y.cols());
    fadoa::CMat r = fadoa::CMat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < t; ++k)
                r(i, j) += y(i, k) * std::conj(y(j, k));
    return r / static_cast<double>(t);
}

inline double correlation(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx inner{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i)
        inner += std::conj(a[i]) * b[i];
    const double n = static_cast<double>(a.size());
    return std::norm(inner) / (n * n);
}

// Central finite difference of the steering vector along one angle axis.
inline std::vector<cplx> steering_derivative(int n_x, int n_z,
                                             const std::vector<double>& dy,
                                             double theta_deg, double phi_deg,
                                             double spacing, double wavelength,
                                             bool wrt_theta, double h_rad = 1e-5) {
    const double h_deg = h_rad * 180.0 / M_PI;
    const double tp = wrt_theta ? theta_deg + h_deg : theta_deg;
    const double tm = wrt_theta ? theta_deg - h_deg : theta_deg;
    const double pp = wrt_theta ? phi_deg : phi_deg + h_deg;
    const double pm = wrt_theta ? phi_deg : phi_deg - h_deg;
    const std::vector<cplx> plus = steering(n_x, n_z, dy, tp, pp, spacing, wavelength);
    const std::vector<cplx> minus = steering(n_x, n_z, dy, tm, pm, spacing, wavelength);
    std::vector<cplx> out(plus.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (plus[i] - minus[i]) / (2.0 * h_rad);
    return out;
}

}  // namespace oracle
