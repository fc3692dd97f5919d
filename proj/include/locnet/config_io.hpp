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

#ifndef LOCNET_CONFIG_IO_HPP
#define LOCNET_CONFIG_IO_HPP

#include "locnet/dataset.hpp"
#include "locnet/digest.hpp"
#include "locnet/model.hpp"
#include "locnet/scenario.hpp"
#include "locnet/train.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace locnet
{
    using json = nlohmann::json;

    // Full JSON form of each config. The merge_* functions overwrite only the keys present in
    // `j` and reject unknown keys, so a file can override a subset of the defaults.
    json to_json(const ScenarioConfig &c);
    void merge_scenario(ScenarioConfig &c, const json &j);

    json to_json(const LocNetConfig &c);
    void merge_model(LocNetConfig &c, const json &j);

    json to_json(const TrainConfig &c);
    void merge_train(TrainConfig &c, const json &j);

    // Dataset recipe as written in config files. Plans stay symbolic until the TRP count and
    // sample total are known.
    struct DatasetRecipe
    {
        Encoding encoding = Encoding::CirRsrp;
        std::size_t samples = 5000;
        std::string variable_trp_plan = "none";
        std::string label_noise_plan = "none";
        std::uint64_t seed = 1;
        SplitFractions split;
        RsrpScaling rsrp;

        DatasetSpec resolve(int n_trp) const;
    };

    json to_json(const DatasetRecipe &r);
    void merge_dataset(DatasetRecipe &r, const json &j);

    // "none" | "default" | "N:count,N:count,..."
    std::vector<TrpPlanEntry> parse_trp_plan(std::string_view text, int n_trp, std::size_t total);
    // "none" | "standard" | "sigma:count,sigma:count,..."
    std::vector<NoisePlanEntry> parse_noise_plan(std::string_view text, std::size_t total);

    // SHA-256 of the canonical JSON form without the seed, which datasets record separately.
    Digest scenario_digest(const ScenarioConfig &c);

    // Throws FormatError on unreadable or malformed JSON.
    json load_json_file(const std::filesystem::path &path);

    // Writes to a sibling temporary file and renames it over `path`.
    void write_file_atomic(const std::filesystem::path &path, std::string_view contents);

} // namespace locnet

#endif
