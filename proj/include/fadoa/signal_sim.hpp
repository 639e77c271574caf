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
#include <vector>

#include "fadoa/random.hpp"
#include "fadoa/types.hpp"

namespace fadoa {

// One synthetic acquisition setup: source angles, per-source SNR relative to
// unit-power noise, snapshot count, and the RNG seed for this acquisition.
// noise_scale is a test hook: 0 produces noiseless data, 1 is nominal.
struct SourceScenario {
    std::vector<AnglePair> sources;
    double snr_db = 10.0;
    int snapshots = 500;
    std::uint64_t seed = 0;
    double noise_scale = 1.0;

    int num_sources() const { return static_cast<int>(sources.size()); }

    void validate(int num_elements) const {
        if (sources.empty())
            throw std::invalid_argument("SourceScenario: at least one source required");
        if (num_sources() > num_elements - 1)
            throw std::invalid_argument(
                "SourceScenario: source count must be <= N-1 for a nonempty noise subspace");
        if (snapshots < 1)
            throw std::invalid_argument("SourceScenario: snapshots must be >= 1");
        if (noise_scale < 0.0)
            throw std::invalid_argument("SourceScenario: noise_scale must be >= 0");
    }
};

// Noise power is fixed at 1; SNR scales the per-source signal power instead.
inline double noise_power_for_snr(double /*snr_db*/) { return 1.0; }

inline double signal_power_for_snr(double snr_db) {
    return std::pow(10.0, snr_db / 10.0);
}

// Y = A*S + W with S ~ i.i.d. circular complex Gaussian of per-source power
// 10^(snr_db/10) and W of unit power. Draw order is fixed (sources first,
// then noise), so a given seed yields bit-identical output and the noiseless
// hook observes the same source waveforms as the noisy run.
inline SnapshotMatrix generate_snapshots(const CMat& manifold,
                                         const SourceScenario& scenario) {
    const int n = static_cast<int>(manifold.rows());
    const int num_src = static_cast<int>(manifold.cols());
    scenario.validate(n);
    if (num_src != scenario.num_sources())
        throw std::invalid_argument(
            "generate_snapshots: manifold columns must match scenario sources");

    const int t = scenario.snapshots;
    GaussianStream rng(substream_seed(scenario.seed));

    CMat s(num_src, t);
    rng.fill_complex(s, signal_power_for_snr(scenario.snr_db));

    SnapshotMatrix y = manifold * s;
    if (scenario.noise_scale > 0.0) {
        CMat w(n, t);
        rng.fill_complex(w, noise_power_for_snr(scenario.snr_db));
        y += scenario.noise_scale * w;
    }
    return y;
}

}  // namespace fadoa
