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

#ifndef LOCNET_TRAIN_HPP
#define LOCNET_TRAIN_HPP

#include "locnet/dataset.hpp"
#include "locnet/model.hpp"

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace locnet
{
    struct TrainConfig
    {
        int epochs = 100;
        int batch_size = 64;
        double lr = 1e-3;
        double beta1 = 0.9;
        double beta2 = 0.999;
        double eps = 1e-8;
        std::uint64_t seed = 1;
        int patience = 20;                 // epochs without validation improvement before stopping; 0 disables
        std::string lr_schedule = "constant"; // or "cosine" (decay to zero over `epochs`)
        int log_every = 1;                 // progress line every n epochs; 0 silences
        double stop_at_val_loss = 0.0;     // stop once the validation loss reaches this value; 0 disables

        void validate() const;
    };

    struct EpochRecord
    {
        int epoch = 0;
        double train_loss = 0.0;
        double val_loss = 0.0;
    };

    struct TrainResult
    {
        std::vector<EpochRecord> history;
        int best_epoch = 0;
        double best_val_loss = 0.0;
        bool stopped_early = false;
        double seconds = 0.0;
    };

    // Minimizes the euclidean loss with Adam. The model ends up holding the weights of the epoch with the
    // lowest validation loss. Throws NumericError on a non-finite loss.
    TrainResult train(LocNet<float> &model, const Dataset &train_set, const Dataset &val_set, const TrainConfig &cfg,
                      std::ostream *progress = nullptr);

    // Eval-mode mean euclidean loss over a dataset.
    double dataset_loss(LocNet<float> &model, const Dataset &data, int batch_size = 64, bool clean_labels = false);

    // Eval-mode predictions, {n, 2} row-major.
    std::vector<float> predict(LocNet<float> &model, const Dataset &data, int batch_size = 64);

    // epoch,train_loss,val_loss
    void write_history_csv(const std::vector<EpochRecord> &history, const std::filesystem::path &path);

} // namespace locnet

#endif
