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

#ifndef LOCNET_EXPERIMENTS_HPP
#define LOCNET_EXPERIMENTS_HPP

#include "locnet/config_io.hpp"
#include "locnet/dataset.hpp"
#include "locnet/eval.hpp"
#include "locnet/model.hpp"
#include "locnet/train.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace locnet
{
    struct ExperimentSettings
    {
        ScenarioConfig scenario = desk_scale_scenario();
        DatasetRecipe recipe;
        LocNetConfig model;
        TrainConfig train;
        Ablation ablation = Ablation::None;
        unsigned threads = 1;
        std::ostream *log = nullptr;
    };

    struct DatasetSplit
    {
        Dataset train, validation, test;
    };

    // Seeded train / validation / test partition. The permutation depends only on the dataset
    // seed and size, so datasets built from the same seed share their split.
    DatasetSplit split_dataset(const Dataset &full, const SplitFractions &fractions);

    struct RunOutcome
    {
        std::string name;
        TrainResult training;
        EvalReport report; // on the test partition
        std::size_t param_count = 0;
    };

    // Trains a fresh model on the train partition (validation for model selection) and
    // evaluates it on the test partition.
    RunOutcome train_and_evaluate(const std::string &name, const DatasetSplit &data, const ExperimentSettings &s,
                                  bool clean_test_labels = false,
                                  std::unique_ptr<LocNet<float>> *keep_model = nullptr);

    // One dataset per encoding (same seed, so same drops, channels and split), one model each.
    std::vector<RunOutcome> run_encoding_comparison(const ExperimentSettings &s, const std::vector<Encoding> &encodings);

    struct LabelNoiseOutcome
    {
        RunOutcome clean;  // trained and tested on clean labels
        RunOutcome noisy;  // trained on the noise plan, tested against clean labels
        double p90_ratio = 0.0;
    };

    // Clean and noisy datasets share seed, drops and split; only the training labels differ.
    LabelNoiseOutcome run_label_noise_experiment(const ExperimentSettings &s);

    // Mixed-N' datasets (the recipe's plan, "default" when it has none), one model per encoding,
    // each tested with a per-N' breakdown.
    std::vector<RunOutcome> run_variable_trp_experiment(const ExperimentSettings &s,
                                                        const std::vector<Encoding> &encodings);

    // Mean of the per-N' p90 values for lo <= N' <= hi. Throws if no row falls in the range.
    double mean_p90_over(const EvalReport &report, int lo, int hi);

    // Writes report directories, compare.csv and history files under `dir`.
    void write_outcomes(const std::vector<RunOutcome> &runs, const std::filesystem::path &dir);

} // namespace locnet

#endif
