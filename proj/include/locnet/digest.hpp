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

#ifndef LOCNET_DIGEST_HPP
#define LOCNET_DIGEST_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace locnet
{
    using Digest = std::array<std::uint8_t, 32>;

    // SHA-256.
    Digest sha256(std::span<const std::uint8_t> bytes);
    Digest sha256(std::string_view text);
    Digest sha256_file(const std::filesystem::path &path);

    std::string to_hex(const Digest &d);

} // namespace locnet

#endif
