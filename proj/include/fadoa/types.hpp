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

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace fadoa {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

// Steering vectors are dense complex vectors with unit-modulus entries.
using SteeringVector = CVec;

// Snapshot matrices are N x T (elements x time samples).
using SnapshotMatrix = CMat;

inline constexpr double pi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * pi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / pi; }

// Azimuth/elevation pair, degrees at every public interface.
struct AnglePair {
    double theta_deg = 0.0;
    double phi_deg = 0.0;

    friend bool operator==(const AnglePair&, const AnglePair&) = default;
};

// Inclusive angular search domain, used to clip local search windows.
struct AngleDomain {
    double lo_deg = 0.0;
    double hi_deg = 90.0;

    double clip(double x) const { return std::min(hi_deg, std::max(lo_deg, x)); }
    bool contains(double x) const { return x >= lo_deg && x <= hi_deg; }
};

// Planar array in the x-z plane with per-element displacement along y.
// Elements are indexed x-major: n = ix * n_z + iz.
struct ArrayGeometry {
    int n_x = 0;
    int n_z = 0;
    double spacing = 0.5;     // inter-element spacing, wavelength units
    double wavelength = 1.0;
    Vec y_displacements;      // empty means all-zero (rigid planar array)

    int size() const { return n_x * n_z; }

    bool has_displacements() const { return y_displacements.size() > 0; }

    double y_at(int n) const {
        return has_displacements() ? y_displacements(n) : 0.0;
    }

    void validate() const {
        if (n_x < 1 || n_z < 1)
            throw std::invalid_argument("ArrayGeometry: n_x and n_z must be >= 1");
        if (!(spacing > 0.0) || !std::isfinite(spacing))
            throw std::invalid_argument("ArrayGeometry: spacing must be positive and finite");
        if (!(wavelength > 0.0) || !std::isfinite(wavelength))
            throw std::invalid_argument("ArrayGeometry: wavelength must be positive and finite");
        if (has_displacements()) {
            if (y_displacements.size() != size())
                throw std::invalid_argument("ArrayGeometry: displacement vector length must equal n_x * n_z");
            if (!y_displacements.allFinite())
                throw std::invalid_argument("ArrayGeometry: displacements must be finite");
        }
    }

    static ArrayGeometry upa(int n_x, int n_z, double spacing = 0.5, double wavelength = 1.0) {
        ArrayGeometry g{n_x, n_z, spacing, wavelength, Vec{}};
        g.validate();
        return g;
    }

    ArrayGeometry with_displacements(Vec dy) const {
        ArrayGeometry g = *this;
        g.y_displacements = std::move(dy);
        g.validate();
        return g;
    }
};

// Per-element x and z coordinates, x-major element order.
struct PositionVectors {
    Vec d_x;
    Vec d_z;
};

}  // namespace fadoa
