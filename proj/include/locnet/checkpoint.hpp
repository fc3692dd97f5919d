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

#ifndef LOCNET_CHECKPOINT_HPP
#define LOCNET_CHECKPOINT_HPP

#include "locnet/dataset.hpp"
#include "locnet/model.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

namespace locnet
{
    // Little-endian layout:
    //   "LNWT" | u16 version | u32 n | n bytes of JSON {model config, encoding, scenario digest}
    //   | u32 tensor count | per tensor: u16 name length, name, u8 rank, u32 dims[rank]
    //   | raw f32 data of every tensor in manifest order
    inline constexpr std::uint16_t checkpoint_format_version = 1;

    struct LoadedModel
    {
        LocNetConfig config;
        Encoding encoding = Encoding::CirRsrp;
        std::string scenario_digest; // hex digest of the training scenario, empty if unknown
        std::unique_ptr<LocNet<float>> model;
    };

    void save_checkpoint(LocNet<float> &model, Encoding encoding, const std::filesystem::path &path,
                         const std::string &scenario_digest = {});

    // Throws FormatError on bad magic, version or a manifest that does not match the stored config.
    LoadedModel load_checkpoint(const std::filesystem::path &path);

} // namespace locnet

#endif
