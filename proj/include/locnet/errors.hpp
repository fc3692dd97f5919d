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

#ifndef LOCNET_ERRORS_HPP
#define LOCNET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace locnet
{
    // Invalid arguments and config violations use std::invalid_argument.
    // The two types below map to distinct CLI exit codes.

    // Malformed, truncated or mismatched dataset / checkpoint files (exit code 3).
    class FormatError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Non-finite loss or activations during training (exit code 4).
    class NumericError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

} // namespace locnet

#endif
