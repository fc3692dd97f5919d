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

#ifndef LOCNET_DATASET_IO_HPP
#define LOCNET_DATASET_IO_HPP

#include "locnet/dataset.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

namespace locnet
{
    // Little-endian layout:
    //   "LNET" | u16 version | u8 encoding id | u32 n_samples | u32 dims[3] | 32-byte scenario digest | u64 seed
    //   | u32 n | n bytes of JSON (scenario, RSRP scaling, IFFT convention, sentinel)
    //   then per sample: f32 tensor[dims] | f32 x | f32 y
    //   | u8 n_trp_available | f32 noise_sigma | u32 ue_index | u64 seed_trace | f32 clean_x | f32 clean_y
    inline constexpr std::uint16_t dataset_format_version = 1;

    struct DatasetHeader
    {
        Encoding encoding = Encoding::CirRsrp;
        std::uint32_t n_samples = 0;
        Shape3 dims{0, 0, 0};
        Digest scenario_digest{};
        std::uint64_t seed = 0;
        ScenarioConfig scenario;
        RsrpScaling rsrp;
    };

    DatasetHeader header_of(const Dataset &d);

    // Streams samples to disk. The file appears under `path` only after finish().
    class DatasetWriter
    {
    public:
        DatasetWriter(const std::filesystem::path &path, const DatasetHeader &header);
        ~DatasetWriter();
        DatasetWriter(const DatasetWriter &) = delete;
        DatasetWriter &operator=(const DatasetWriter &) = delete;

        void write(const Sample &s);
        void finish();

    private:
        std::filesystem::path path_, tmp_;
        DatasetHeader header_;
        std::ofstream out_;
        std::uint32_t written_ = 0;
        bool finished_ = false;
    };

    void serialize(const Dataset &d, const std::filesystem::path &path);

    // Throws FormatError on bad magic, unsupported version, inconsistent shape or a truncated file.
    Dataset deserialize(const std::filesystem::path &path);
    DatasetHeader read_header(const std::filesystem::path &path);

} // namespace locnet

#endif
