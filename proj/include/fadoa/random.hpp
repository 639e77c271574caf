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

#include <cstdint>
#include <initializer_list>
#include <random>

#include "fadoa/types.hpp"

namespace fadoa {

// SplitMix64 finalizer. Used only to derive well-separated substream seeds;
// the draws themselves come from std::mt19937_64.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic substream seed from a master seed and a path of indices
// (e.g. {sweep index, trial index, configuration index}). Distinct paths
// give statistically independent streams, so Monte Carlo results do not
// depend on evaluation order.
inline std::uint64_t substream_seed(std::uint64_t seed,
                                    std::initializer_list<std::uint64_t> path = {}) {
    std::uint64_t h = splitmix64(seed);
    for (std::uint64_t p : path)
        h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
    return h;
}

// Seeded Gaussian stream with a fixed draw order (column-major fill,
// real part before imaginary part), so output is bit-reproducible.
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

    double normal() { return dist_(engine_); }

    // Fills an L x T complex matrix with i.i.d. circular complex Gaussian
    // entries of total per-entry variance sigma2.
    void fill_complex(CMat& m, double sigma2) {
        const double scale = std::sqrt(sigma2 / 2.0);
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            for (Eigen::Index r = 0; r < m.rows(); ++r) {
                const double re = dist_(engine_);
                const double im = dist_(engine_);
                m(r, c) = cplx(scale * re, scale * im);
            }
        }
    }

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> dist_{0.0, 1.0};
};

}  // namespace fadoa
