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

#ifndef LOCNET_RNG_HPP
#define LOCNET_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace locnet
{
    using Rng = std::mt19937_64;

    // Labeled sub-streams. Every consumer of randomness derives its own stream from the
    // master seed so that changing one knob never shifts the draws of another.
    namespace stream
    {
        inline constexpr std::string_view scenario = "scenario";
        inline constexpr std::string_view los = "los";
        inline constexpr std::string_view fading = "fading";
        inline constexpr std::string_view masking = "masking";
        inline constexpr std::string_view label_noise = "label-noise";
        inline constexpr std::string_view shuffle = "shuffle";
        inline constexpr std::string_view split = "split";
        inline constexpr std::string_view init = "init";
        inline constexpr std::string_view dropout = "dropout";
        inline constexpr std::string_view batches = "batches";
    } // namespace stream

    constexpr std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    constexpr std::uint64_t fnv1a(std::string_view s)
    {
        std::uint64_t h = 0xCBF29CE484222325ULL;
        for (char c : s)
        {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001B3ULL;
        }
        return h;
    }

    // Seed for stream `label`, item `index` under `master`.
    constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index = 0)
    {
        return splitmix64(splitmix64(master ^ fnv1a(label)) + splitmix64(index + 0x632BE59BD9B4E019ULL));
    }

    inline Rng make_rng(std::uint64_t master, std::string_view label, std::uint64_t index = 0)
    {
        return Rng(derive_seed(master, label, index));
    }

} // namespace locnet

#endif
