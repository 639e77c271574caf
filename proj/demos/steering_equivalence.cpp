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

// Demonstrates the core identity: solving for per-element y displacements
// makes the array's response to an end-fire source equal the flat-array
// response at a benign preset angle.

#include <cstdio>

#include "fadoa/fadoa.hpp"

using namespace fadoa;

int main() {
    const ArrayGeometry flat = ArrayGeometry::upa(8, 8);
    const AnglePair truth{86.0, 86.0};
    const AnglePair virt{30.0, 30.0};

    const Vec dy = solve_y_displacements(truth, virt, flat);
    const ArrayGeometry moved = flat.with_displacements(dy);

    const SteeringVector a_truth_flat = steering_upa(truth, flat);
    const SteeringVector a_virt_flat = steering_upa(virt, flat);
    const SteeringVector a_truth_moved = steering_fa(truth, moved);

    std::printf("true angle (%.1f, %.1f), preset virtual angle (%.1f, %.1f)\n",
                truth.theta_deg, truth.phi_deg, virt.theta_deg, virt.phi_deg);
    std::printf("y displacements span [%.3f, %.3f] wavelengths\n", dy.minCoeff(),
                dy.maxCoeff());

    std::printf("\ncorrelation of the flat array response at the true angle\n");
    std::printf("  vs the virtual angle:      %.6f\n",
                steering_correlation(a_truth_flat, a_virt_flat));
    std::printf("after moving the elements:\n");
    std::printf("  vs the virtual angle:      %.6f\n",
                steering_correlation(a_truth_moved, a_virt_flat));
    std::printf("max elementwise mismatch:    %.3e\n",
                (a_truth_moved - a_virt_flat).cwiseAbs().maxCoeff());

    std::printf("\nfirst four elements (moved array at truth vs flat at virtual):\n");
    for (int i = 0; i < 4; ++i)
        std::printf("  %+.6f%+.6fi   %+.6f%+.6fi\n", a_truth_moved(i).real(),
                    a_truth_moved(i).imag(), a_virt_flat(i).real(),
                    a_virt_flat(i).imag());
    return 0;
}
