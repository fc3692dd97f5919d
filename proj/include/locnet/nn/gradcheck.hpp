// SPDX-License-Identifier: Apache-2.0
//
// locnet-bench: deep-learning indoor positioning benchmark for InF-DH scenarios
// Copyright (C) 2026 The locnet-bench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef LOCNET_NN_GRADCHECK_HPP
#define LOCNET_NN_GRADCHECK_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace locnet::nn
{
    struct GradcheckOptions
    {
        double h = 1e-5;               // central-difference step
        double tolerance = 1e-4;       // on |a - n| / max(|a|, |n|, floor)
        double floor = 1e-6;           // raised to noise / tolerance when the loss rounding noise is larger
        std::size_t max_coords = 48;   // sampled coordinates per tensor
        std::uint64_t seed = 1;
        std::string inject_fault;      // layer whose analytic gradient gets corrupted (harness self-test)
    };

    struct GradcheckResult
    {
        std::string layer;
        double max_rel_error = 0.0;
        std::size_t checked = 0;
        std::size_t skipped = 0; // coordinates whose perturbation crossed a ReLU kink
        bool passed = false;
    };

    // Every layer type, a residual block, the loss and a small composed LocNet, all in double
    // precision, compared against central finite differences.
    std::vector<GradcheckResult> run_gradcheck(const GradcheckOptions &opt);

    // Names accepted by GradcheckOptions::inject_fault.
    std::vector<std::string> gradcheck_layer_names();

} // namespace locnet::nn

#endif
