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

#include <cstdio>
#include <optional>
#include <vector>

#include "fadoa/errors.hpp"
#include "fadoa/types.hpp"

namespace fadoa {

// Direction cosines of an incoming plane wave w.r.t. the array axes.
// u multiplies x-positions, v multiplies z-positions, s multiplies the
// y-displacements. s -> 0 at theta=0 or phi=90, which is exactly the
// singular set of solve_y_displacements.
struct DirectionCosines {
    double u;  // cos(theta) * cos(phi)
    double v;  // sin(phi)
    double s;  // sin(theta) * cos(phi)
};

inline DirectionCosines direction_cosines(AnglePair angle) {
    const double th = deg2rad(angle.theta_deg);
    const double ph = deg2rad(angle.phi_deg);
    return {std::cos(th) * std::cos(ph), std::sin(ph), std::sin(th) * std::cos(ph)};
}

// Element coordinates along x and z, x-major order: n = ix * n_z + iz.
inline PositionVectors position_vectors(const ArrayGeometry& geometry) {
    geometry.validate();
    const int n = geometry.size();
    PositionVectors p{Vec(n), Vec(n)};
    for (int ix = 0; ix < geometry.n_x; ++ix) {
        for (int iz = 0; iz < geometry.n_z; ++iz) {
            const int idx = ix * geometry.n_z + iz;
            p.d_x(idx) = geometry.spacing * ix;
            p.d_z(idx) = geometry.spacing * iz;
        }
    }
    return p;
}

namespace detail {

inline SteeringVector unit_phasor(const Vec& phase) {
    SteeringVector a(phase.size());
    a.real() = phase.array().cos();
    a.imag() = phase.array().sin();
    return a;
}

}  // namespace detail

// Planar-array steering vector; first element is the phase reference.
inline SteeringVector steering_upa(AnglePair angle, const ArrayGeometry& geometry) {
    const PositionVectors p = position_vectors(geometry);
    const DirectionCosines dc = direction_cosines(angle);
    const double k = 2.0 * pi / geometry.wavelength;
    return detail::unit_phasor(k * (p.d_x * dc.u + p.d_z * dc.v));
}

// Phase factor contributed by per-element displacement along y only.
inline SteeringVector steering_y_shift(AnglePair angle, const Vec& y_displacements,
                                       double wavelength = 1.0) {
    const DirectionCosines dc = direction_cosines(angle);
    const double k = 2.0 * pi / wavelength;
    return detail::unit_phasor(k * dc.s * y_displacements);
}

// Full steering vector of the displaced array: element-wise product of the
// planar part and the y-shift part.
inline SteeringVector steering_fa(AnglePair angle, const ArrayGeometry& geometry) {
    const PositionVectors p = position_vectors(geometry);
    const DirectionCosines dc = direction_cosines(angle);
    const double k = 2.0 * pi / geometry.wavelength;
    Vec phase = k * (p.d_x * dc.u + p.d_z * dc.v);
    if (geometry.has_displacements())
        phase += k * dc.s * geometry.y_displacements;
    return detail::unit_phasor(phase);
}

// Per-element y displacements that make the displaced-array steering vector
// at true_angle coincide with the planar steering vector at virtual_angle:
//   d_y = (d_x*(u_v - u_t) + d_z*(v_v - v_t)) / s_t
// Throws SingularTrueAngle when s_t = sin(theta_t)cos(phi_t) vanishes.
inline Vec solve_y_displacements(AnglePair true_angle, AnglePair virtual_angle,
                                 const ArrayGeometry& geometry,
                                 double singular_tol = 1e-6,
                                 std::optional<double> max_travel = std::nullopt) {
    geometry.validate();
    const DirectionCosines t = direction_cosines(true_angle);
    const DirectionCosines v = direction_cosines(virtual_angle);
    if (std::abs(t.s) < singular_tol)
        throw SingularTrueAngle("solve_y_displacements: sin(theta)*cos(phi) = " +
                                std::to_string(t.s) + " at true angle (" +
                                std::to_string(true_angle.theta_deg) + ", " +
                                std::to_string(true_angle.phi_deg) + ") deg");
    const PositionVectors p = position_vectors(geometry);
    Vec dy = (p.d_x * (v.u - t.u) + p.d_z * (v.v - t.v)) / t.s;
    if (max_travel) {
        const double limit = std::abs(*max_travel);
        const double peak = dy.cwiseAbs().maxCoeff();
        if (peak > limit) {
            std::fprintf(stderr,
                         "solve_y_displacements: clamping displacements "
                         "(max |d_y| %.4f exceeds travel limit %.4f)\n",
                         peak, limit);
            dy = dy.cwiseMax(-limit).cwiseMin(limit);
        }
    }
    return dy;
}

// Normalized squared inner product of two equal-length steering vectors.
// Equals 1 iff the vectors are phase-aligned copies (for unit-modulus entries).
inline double steering_correlation(const SteeringVector& a, const SteeringVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("steering_correlation: length mismatch");
    const double n = static_cast<double>(a.size());
    const double inner = std::abs(a.dot(b));  // Eigen dot conjugates the left argument
    return (inner * inner) / (n * n);
}

// Manifold matrix: one steering column per source angle.
inline CMat steering_matrix(const std::vector<AnglePair>& angles,
                            const ArrayGeometry& geometry) {
    CMat a(geometry.size(), static_cast<Eigen::Index>(angles.size()));
    for (std::size_t i = 0; i < angles.size(); ++i)
        a.col(static_cast<Eigen::Index>(i)) = steering_fa(angles[i], geometry);
    return a;
}

// Closure evaluating the zero-displacement (planar) steering vector with
// element positions computed once up front; suited for dense grid sweeps.
inline auto make_upa_steering_fn(const ArrayGeometry& geometry) {
    const PositionVectors p = position_vectors(geometry);
    const double k = 2.0 * pi / geometry.wavelength;
    return [p, k](AnglePair angle) -> SteeringVector {
        const DirectionCosines dc = direction_cosines(angle);
        return detail::unit_phasor(k * (p.d_x * dc.u + p.d_z * dc.v));
    };
}

// Steering vector together with its analytic partial derivatives w.r.t.
// theta and phi (radians), used by the Fisher-information bound.
struct SteeringDerivatives {
    SteeringVector a;
    CVec d_theta;
    CVec d_phi;
};

inline SteeringDerivatives steering_derivatives(AnglePair angle,
                                                const ArrayGeometry& geometry) {
    const PositionVectors p = position_vectors(geometry);
    const double th = deg2rad(angle.theta_deg);
    const double ph = deg2rad(angle.phi_deg);
    const double ct = std::cos(th), st = std::sin(th);
    const double cp = std::cos(ph), sp = std::sin(ph);
    const double k = 2.0 * pi / geometry.wavelength;
    const int n = geometry.size();

    Vec dy = geometry.has_displacements() ? geometry.y_displacements : Vec::Zero(n);
    Vec phase = k * (p.d_x * (ct * cp) + p.d_z * sp + dy * (st * cp));
    Vec dphase_dth = k * (p.d_x * (-st * cp) + dy * (ct * cp));
    Vec dphase_dph = k * (p.d_x * (-ct * sp) + p.d_z * cp + dy * (-st * sp));

    SteeringDerivatives out;
    out.a = detail::unit_phasor(phase);
    out.d_theta = CVec(n);
    out.d_phi = CVec(n);
    for (int i = 0; i < n; ++i) {
        const cplx ja = cplx(0.0, 1.0) * out.a(i);
        out.d_theta(i) = ja * dphase_dth(i);
        out.d_phi(i) = ja * dphase_dph(i);
    }
    return out;
}

}  // namespace fadoa
