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

#include <stdexcept>
#include <string>

namespace fadoa {

// Displacement solve requested at an angle where the y-axis phase term
// vanishes (sin(theta)*cos(phi) ~ 0) and no finite displacement exists.
struct SingularTrueAngle : std::runtime_error {
    explicit SingularTrueAngle(const std::string& msg) : std::runtime_error(msg) {}
};

// Candidate trajectory construction produced no usable configuration.
struct EmptyTrajectory : std::runtime_error {
    explicit EmptyTrajectory(const std::string& msg) : std::runtime_error(msg) {}
};

// Eigendecomposition failed or the requested signal/noise split is invalid.
struct DegenerateSubspace : std::runtime_error {
    explicit DegenerateSubspace(const std::string& msg) : std::runtime_error(msg) {}
};

// A matrix expected to have full rank for the requested operation does not.
struct RankDeficient : std::runtime_error {
    explicit RankDeficient(const std::string& msg) : std::runtime_error(msg) {}
};

// Fisher information matrix is numerically singular; no finite bound exists.
struct SingularFisher : std::runtime_error {
    explicit SingularFisher(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fadoa
