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

#include "fadoa/baselines.hpp"
#include "fadoa/errors.hpp"
#include "fadoa/experiments.hpp"
#include "fadoa/pipeline.hpp"
#include "fadoa/random.hpp"
#include "fadoa/signal_sim.hpp"
#include "fadoa/steering.hpp"
#include "fadoa/subspace.hpp"
#include "fadoa/types.hpp"
