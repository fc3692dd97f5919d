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

#include "locnet/train.hpp"

#include "locnet/errors.hpp"
#include "locnet/nn/adam.hpp"
#include "locnet/nn/loss.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace locnet
{
    void TrainConfig::validate() const
    {
        if (epochs < 1)
            throw std::invalid_argument("TrainConfig: epochs must be >= 1");
        if (batch_size < 2)
            throw std::invalid_argument("TrainConfig: batch_size must be >= 2 (batch normalization)");
        if (!(lr >= 0.0) || !std::isfinite(lr))
            throw std::invalid_argument("TrainConfig: lr must be finite and >= 0");
        if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0) || !(eps > 0.0))
            throw std::invalid_argument("TrainConfig: Adam constants out of range");
        if (patience < 0)
            throw std::invalid_argument("TrainConfig: patience must be >= 0");
        if (!(stop_at_val_loss >= 0.0))
            throw std::invalid_argument("TrainConfig: stop_at_val_loss must be >= 0");
        if (lr_schedule != "constant" && lr_schedule != "cosine")
            throw std::invalid_argument("TrainConfig: lr_schedule must be 'constant' or 'cosine'");
    }

    namespace
    {
        void check_compatible(const LocNet<float> &model, const Dataset &d, const char *role)
        {
            if (d.dims != model.config().input_shape)
                throw std::invalid_argument(std::string(role) + " set shape {" + std::to_string(d.dims[0]) + ", " +
                                            std::to_string(d.dims[1]) + ", " + std::to_string(d.dims[2]) +
                                            "} does not match the model input");
        }

        std::vector<std::vector<float>> snapshot(const nn::ParamList<float> &state)
        {
            std::vector<std::vector<float>> out;
            out.reserve(state.size());
            for (const auto &t : state)
                out.push_back(t.tensor->values);
            return out;
        }

        void restore(const nn::ParamList<float> &state, const std::vector<std::vector<float>> &saved)
        {
            for (std::size_t i = 0; i < state.size(); ++i)
                state[i].tensor->values = saved[i];
        }

        // Contiguous batches over `order`; a trailing batch of one joins the previous batch.
        std::vector<std::span<const std::size_t>> make_batches(const std::vector<std::size_t> &order, std::size_t bs)
        {
            std::vector<std::span<const std::size_t>> out;
            const std::size_t n = order.size();
            std::size_t begin = 0;
            while (begin < n)
            {
                std::size_t end = std::min(n, begin + bs);
                if (n - end == 1)
                    end = n;
                out.emplace_back(order.data() + begin, end - begin);
                begin = end;
            }
            return out;
        }
    } // namespace

    double dataset_loss(LocNet<float> &model, const Dataset &data, int batch_size, bool clean_labels)
    {
        if (data.size() == 0)
            throw std::invalid_argument("dataset_loss: empty dataset");
        std::vector<std::size_t> idx(data.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        double total = 0.0;
        for (std::size_t begin = 0; begin < idx.size(); begin += static_cast<std::size_t>(batch_size))
        {
            const std::size_t end = std::min(idx.size(), begin + static_cast<std::size_t>(batch_size));
            std::span<const std::size_t> b(idx.data() + begin, end - begin);
            const auto pred = model.forward(make_batch<float>(data, b), nn::Mode::Eval);
            const auto truth = make_labels<float>(data, b, clean_labels);
            total += static_cast<double>(nn::euclidean_loss(pred, truth)) * static_cast<double>(b.size());
        }
        return total / static_cast<double>(data.size());
    }

    std::vector<float> predict(LocNet<float> &model, const Dataset &data, int batch_size)
    {
        check_compatible(model, data, "evaluation");
        std::vector<std::size_t> idx(data.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::vector<float> out;
        out.reserve(2 * data.size());
        for (std::size_t begin = 0; begin < idx.size(); begin += static_cast<std::size_t>(batch_size))
        {
            const std::size_t end = std::min(idx.size(), begin + static_cast<std::size_t>(batch_size));
            std::span<const std::size_t> b(idx.data() + begin, end - begin);
            const auto pred = model.forward(make_batch<float>(data, b), nn::Mode::Eval);
            out.insert(out.end(), pred.values.begin(), pred.values.end());
        }
        return out;
    }

    TrainResult train(LocNet<float> &model, const Dataset &train_set, const Dataset &val_set, const TrainConfig &cfg,
                      std::ostream *progress)
    {
        cfg.validate();
        check_compatible(model, train_set, "training");
        check_compatible(model, val_set, "validation");
        if (train_set.size() < 2)
            throw std::invalid_argument("train: need at least 2 training samples");
        if (val_set.size() == 0)
            throw std::invalid_argument("train: validation set is empty");

        const auto t0 = std::chrono::steady_clock::now();
        model.dropout.reseed(derive_seed(cfg.seed, stream::dropout));
        nn::Adam<float> opt(model.parameters(), {cfg.lr, cfg.beta1, cfg.beta2, cfg.eps});
        const nn::ParamList<float> state = model.state();

        TrainResult result;
        result.best_val_loss = std::numeric_limits<double>::infinity();
        auto best = snapshot(state);
        int since_best = 0;

        std::vector<std::size_t> order(train_set.size());
        for (int epoch = 1; epoch <= cfg.epochs; ++epoch)
        {
            double lr = cfg.lr;
            if (cfg.lr_schedule == "cosine")
                lr = 0.5 * cfg.lr * (1.0 + std::cos(std::numbers::pi * (epoch - 1) / cfg.epochs));
            opt.set_lr(lr);

            std::iota(order.begin(), order.end(), std::size_t{0});
            Rng rng = make_rng(cfg.seed, stream::batches, static_cast<std::uint64_t>(epoch));
            std::shuffle(order.begin(), order.end(), rng);

            double sum = 0.0;
            std::size_t batch_index = 0;
            for (auto b : make_batches(order, static_cast<std::size_t>(cfg.batch_size)))
            {
                const auto x = make_batch<float>(train_set, b);
                const auto y = make_labels<float>(train_set, b);
                const auto pred = model.forward(x, nn::Mode::Train);
                nn::Tensor<float> grad;
                const double loss = nn::euclidean_loss(pred, y, &grad);
                if (!std::isfinite(loss))
                {
                    std::ostringstream os;
                    os << "non-finite training loss at epoch " << epoch << ", batch " << batch_index << " (lr " << lr
                       << ")";
                    throw NumericError(os.str());
                }
                opt.zero_grad();
                model.backward(grad);
                opt.step();
                sum += loss * static_cast<double>(b.size());
                ++batch_index;
            }

            EpochRecord rec{epoch, sum / static_cast<double>(train_set.size()), dataset_loss(model, val_set)};
            if (!std::isfinite(rec.val_loss))
            {
                std::ostringstream os;
                os << "non-finite validation loss at epoch " << epoch << " (lr " << lr << ")";
                throw NumericError(os.str());
            }
            result.history.push_back(rec);
            if (rec.val_loss < result.best_val_loss)
            {
                result.best_val_loss = rec.val_loss;
                result.best_epoch = epoch;
                best = snapshot(state);
                since_best = 0;
            }
            else
                ++since_best;

            const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (progress && cfg.log_every > 0 && (epoch % cfg.log_every == 0 || epoch == cfg.epochs))
            {
                std::ostringstream line;
                line << "epoch " << epoch << "  train_loss " << std::fixed << std::setprecision(4) << rec.train_loss
                     << "  val_loss " << rec.val_loss << "  elapsed " << std::setprecision(1) << elapsed << "s\n";
                *progress << line.str() << std::flush;
            }
            if ((cfg.patience > 0 && since_best >= cfg.patience) || rec.val_loss <= cfg.stop_at_val_loss)
            {
                result.stopped_early = true;
                break;
            }
        }
        restore(state, best);
        result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return result;
    }

    void write_history_csv(const std::vector<EpochRecord> &history, const std::filesystem::path &path)
    {
        std::ofstream out(path, std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + path.string());
        out << "epoch,train_loss,val_loss\n" << std::setprecision(9);
        for (const auto &r : history)
            out << r.epoch << ',' << r.train_loss << ',' << r.val_loss << '\n';
    }

} // namespace locnet
