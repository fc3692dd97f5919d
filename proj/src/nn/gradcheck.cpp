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

#include "locnet/nn/gradcheck.hpp"

#include "locnet/model.hpp"
#include "locnet/nn/layers.hpp"
#include "locnet/nn/loss.hpp"
#include "locnet/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

namespace locnet::nn
{
    namespace
    {
        using TensorD = Tensor<double>;

        struct Subject
        {
            std::string name;
            std::function<TensorD(const TensorD &)> forward;
            std::function<TensorD(const TensorD &)> backward;
            ParamList<double> params;
            TensorD input;
            // Concatenated ReLU masks of the last forward; empty when the subject has no kinks.
            std::function<std::vector<unsigned char>()> kinks = [] { return std::vector<unsigned char>{}; };
            // Loss head: either a fixed random projection (default) or the euclidean loss.
            bool euclidean_head = false;
        };

        TensorD random_tensor(const Shape &s, Rng &rng, double scale = 1.0)
        {
            std::normal_distribution<double> g(0.0, scale);
            TensorD t(s);
            for (auto &v : t.values)
                v = g(rng);
            return t;
        }

        std::vector<std::size_t> sample_coords(std::size_t n, std::size_t max, Rng &rng)
        {
            std::vector<std::size_t> idx(n);
            std::iota(idx.begin(), idx.end(), std::size_t{0});
            if (n > max)
            {
                std::shuffle(idx.begin(), idx.end(), rng);
                idx.resize(max);
                std::sort(idx.begin(), idx.end());
            }
            return idx;
        }

        GradcheckResult check(Subject &s, const GradcheckOptions &opt, Rng &rng)
        {
            GradcheckResult res;
            res.layer = s.name;

            const TensorD y0 = s.forward(s.input);
            const TensorD proj = random_tensor(y0.shape, rng);
            const TensorD truth = s.euclidean_head ? random_tensor(y0.shape, rng, 3.0) : TensorD();

            auto head = [&](const TensorD &y, TensorD *grad) -> double
            {
                if (s.euclidean_head)
                    return euclidean_loss(y, truth, grad);
                if (grad)
                    *grad = proj;
                double l = 0.0;
                for (std::size_t i = 0; i < y.size(); ++i)
                    l += proj.values[i] * y.values[i];
                return l;
            };

            // Analytic pass.
            zero_grads(s.params);
            const TensorD y = s.forward(s.input);
            const std::vector<unsigned char> base_kinks = s.kinks();
            TensorD gy;
            head(y, &gy);
            TensorD dx = s.backward(gy);
            std::vector<std::vector<double>> analytic;
            analytic.push_back(dx.values);
            for (const auto &p : s.params)
                analytic.push_back(p.tensor->grad);
            if (!opt.inject_fault.empty() && opt.inject_fault == s.name)
                for (auto &a : analytic)
                    for (auto &v : a)
                        v *= 1.01;

            std::vector<std::vector<double> *> targets{&s.input.values};
            for (const auto &p : s.params)
                targets.push_back(&p.tensor->values);

            for (std::size_t t = 0; t < targets.size(); ++t)
            {
                std::vector<double> &vals = *targets[t];
                for (std::size_t i : sample_coords(vals.size(), opt.max_coords, rng))
                {
                    const double orig = vals[i];
                    vals[i] = orig + opt.h;
                    const double lp = head(s.forward(s.input), nullptr);
                    const bool kink_p = s.kinks() != base_kinks;
                    vals[i] = orig - opt.h;
                    const double lm = head(s.forward(s.input), nullptr);
                    const bool kink_m = s.kinks() != base_kinks;
                    vals[i] = orig;
                    if (kink_p || kink_m)
                    {
                        ++res.skipped;
                        continue;
                    }
                    const double num = (lp - lm) / (2.0 * opt.h);
                    const double a = analytic[t][i];
                    // A discrepancy within the rounding noise of the difference quotient is not counted.
                    // Exactly-zero gradients (a conv bias feeding batch norm) would fail otherwise.
                    const double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                                         (std::abs(lp) + std::abs(lm)) / (2.0 * opt.h);
                    const double floor = std::max(opt.floor, noise / opt.tolerance);
                    const double rel = std::abs(a - num) / std::max({std::abs(a), std::abs(num), floor});
                    res.max_rel_error = std::max(res.max_rel_error, rel);
                    ++res.checked;
                }
            }
            res.passed = res.checked > 0 && res.max_rel_error < opt.tolerance;
            return res;
        }

        template <typename L>
        Subject layer_subject(std::string name, L &layer, Mode mode, TensorD input)
        {
            Subject s;
            s.name = std::move(name);
            s.forward = [&layer, mode](const TensorD &x) { return layer.forward(x, mode); };
            s.backward = [&layer](const TensorD &g) { return layer.backward(g); };
            layer.parameters(s.params, s.name);
            s.input = std::move(input);
            return s;
        }

        // Inputs kept away from the ReLU kink so every coordinate is checkable.
        TensorD away_from_zero(const Shape &shape, Rng &rng)
        {
            TensorD t = random_tensor(shape, rng);
            for (auto &v : t.values)
                if (std::abs(v) < 0.05)
                    v = v < 0 ? v - 0.1 : v + 0.1;
            return t;
        }
    } // namespace

    std::vector<std::string> gradcheck_layer_names()
    {
        return {"conv2d",       "conv2d_dilated", "batchnorm2d_train", "batchnorm2d_eval", "relu",
                "sigmoid",      "flatten",        "dropout",           "dense",            "euclidean_loss",
                "residual_block", "locnet"};
    }

    std::vector<GradcheckResult> run_gradcheck(const GradcheckOptions &opt)
    {
        Rng rng = make_rng(opt.seed, "gradcheck");
        std::vector<GradcheckResult> out;

        {
            Conv2d<double> conv(2, 3, 3, 1);
            conv.init(rng);
            conv.bias = random_tensor(conv.bias.shape, rng);
            conv.bias.grad.assign(conv.bias.size(), 0.0);
            auto s = layer_subject("conv2d", conv, Mode::Train, random_tensor({2, 2, 5, 6}, rng));
            out.push_back(check(s, opt, rng));
        }
        {
            Conv2d<double> conv(2, 3, 3, 2);
            conv.init(rng);
            auto s = layer_subject("conv2d_dilated", conv, Mode::Train, random_tensor({2, 2, 5, 7}, rng));
            out.push_back(check(s, opt, rng));
        }
        {
            BatchNorm2d<double> bn(3);
            bn.gamma = random_tensor({3}, rng);
            bn.gamma.grad.assign(3, 0.0);
            bn.beta = random_tensor({3}, rng);
            bn.beta.grad.assign(3, 0.0);
            auto s = layer_subject("batchnorm2d_train", bn, Mode::Train, random_tensor({3, 4, 3, 3}, rng, 2.0));
            out.push_back(check(s, opt, rng));
        }
        {
            BatchNorm2d<double> bn(3);
            bn.gamma = random_tensor({3}, rng);
            bn.gamma.grad.assign(3, 0.0);
            for (std::size_t c = 0; c < 3; ++c)
            {
                bn.running_mean.values[c] = 0.3 * static_cast<double>(c);
                bn.running_var.values[c] = 0.5 + static_cast<double>(c);
            }
            auto s = layer_subject("batchnorm2d_eval", bn, Mode::Eval, random_tensor({3, 2, 3, 3}, rng));
            out.push_back(check(s, opt, rng));
        }
        {
            ReLU<double> relu;
            auto s = layer_subject("relu", relu, Mode::Train, away_from_zero({2, 3, 3, 4}, rng));
            out.push_back(check(s, opt, rng));
        }
        {
            Sigmoid<double> sig;
            auto s = layer_subject("sigmoid", sig, Mode::Train, random_tensor({2, 3, 3, 4}, rng, 2.0));
            out.push_back(check(s, opt, rng));
        }
        {
            Flatten<double> flat;
            auto s = layer_subject("flatten", flat, Mode::Train, random_tensor({3, 2, 2, 4}, rng));
            out.push_back(check(s, opt, rng));
        }
        {
            Dropout<double> drop(0.3, derive_seed(opt.seed, stream::dropout));
            drop.forward(TensorD({4, 10}), Mode::Train);
            drop.freeze_mask(true);
            auto s = layer_subject("dropout", drop, Mode::Train, random_tensor({4, 10}, rng));
            out.push_back(check(s, opt, rng));
        }
        {
            Dense<double> dense(7, 3);
            dense.init(rng);
            dense.bias = random_tensor({3}, rng);
            dense.bias.grad.assign(3, 0.0);
            auto s = layer_subject("dense", dense, Mode::Train, random_tensor({4, 7}, rng));
            out.push_back(check(s, opt, rng));
        }
        {
            Subject s;
            s.name = "euclidean_loss";
            s.forward = [](const TensorD &x) { return x; };
            s.backward = [](const TensorD &g) { return g; };
            s.euclidean_head = true;
            s.input = random_tensor({5, 2}, rng, 3.0);
            out.push_back(check(s, opt, rng));
        }
        {
            ResidualBlock<double> block(3, 3, 2);
            block.conv1.init(rng);
            block.conv2.init(rng);
            Subject s;
            s.name = "residual_block";
            s.forward = [&block](const TensorD &x) { return block.forward(x, Mode::Train); };
            s.backward = [&block](const TensorD &g) { return block.backward(g); };
            block.state(s.params, s.name, false);
            s.kinks = [&block]
            {
                auto m = block.relu1.mask();
                m.insert(m.end(), block.relu2.mask().begin(), block.relu2.mask().end());
                return m;
            };
            s.input = random_tensor({3, 3, 4, 5}, rng);
            out.push_back(check(s, opt, rng));
        }
        {
            LocNetConfig cfg;
            cfg.n_residual_blocks = 2;
            cfg.base_channels = 3;
            cfg.head_channels = 2;
            cfg.dilation_schedule = {1, 2};
            cfg.dropout_rate = 0.3;
            cfg.input_shape = {4, 6, 2};
            cfg.output_bias = {0.0, 0.0};
            LocNet<double> net(cfg, opt.seed);
            net.dropout.forward(TensorD({3, 2 * 4 * 6}), Mode::Train);
            net.dropout.freeze_mask(true);
            Subject s;
            s.name = "locnet";
            s.forward = [&net](const TensorD &x) { return net.forward(x, Mode::Train); };
            s.backward = [&net](const TensorD &g) { return net.backward(g); };
            s.params = net.parameters();
            s.kinks = [&net]
            {
                std::vector<unsigned char> m = net.stem_relu.mask();
                for (auto &b : net.blocks)
                {
                    m.insert(m.end(), b->relu1.mask().begin(), b->relu1.mask().end());
                    m.insert(m.end(), b->relu2.mask().begin(), b->relu2.mask().end());
                }
                m.insert(m.end(), net.head_relu.mask().begin(), net.head_relu.mask().end());
                return m;
            };
            s.euclidean_head = true;
            s.input = random_tensor({2, 3, 4, 6}, rng);
            out.push_back(check(s, opt, rng));
        }
        return out;
    }

} // namespace locnet::nn
