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

#ifndef LOCNET_NN_ADAM_HPP
#define LOCNET_NN_ADAM_HPP

#include "locnet/nn/tensor.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace locnet::nn
{
    struct AdamConfig
    {
        double lr = 1e-3;
        double beta1 = 0.9;
        double beta2 = 0.999;
        double eps = 1e-8;
    };

    // One bias-corrected Adam update of `values` in place; `step` is the 1-based step count.
    template <typename T>
    void adam_update(std::span<T> values, std::span<const T> grads, std::span<T> m, std::span<T> v, std::size_t step,
                     const AdamConfig &cfg)
    {
        if (grads.size() != values.size() || m.size() != values.size() || v.size() != values.size())
            throw std::invalid_argument("adam_update: buffer size mismatch");
        if (step == 0)
            throw std::invalid_argument("adam_update: step counts from 1");
        const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
        const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
        for (std::size_t i = 0; i < values.size(); ++i)
        {
            const double g = grads[i];
            const double mi = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
            const double vi = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
            m[i] = static_cast<T>(mi);
            v[i] = static_cast<T>(vi);
            if (cfg.lr != 0.0)
                values[i] = static_cast<T>(values[i] - cfg.lr * (mi / c1) / (std::sqrt(vi / c2) + cfg.eps));
        }
    }

    template <typename T>
    class Adam
    {
    public:
        Adam(ParamList<T> params, AdamConfig cfg) : params_(std::move(params)), cfg_(cfg)
        {
            for (const auto &p : params_)
            {
                m_.emplace_back(p.tensor->size(), T(0));
                v_.emplace_back(p.tensor->size(), T(0));
            }
        }

        void step()
        {
            ++t_;
            for (std::size_t i = 0; i < params_.size(); ++i)
            {
                Tensor<T> &p = *params_[i].tensor;
                adam_update<T>(p.values, p.grad, m_[i], v_[i], t_, cfg_);
            }
        }

        void zero_grad() { zero_grads(params_); }
        void set_lr(double lr) { cfg_.lr = lr; }
        const AdamConfig &config() const { return cfg_; }
        std::size_t steps() const { return t_; }
        const std::vector<T> &first_moment(std::size_t i) const { return m_.at(i); }
        const std::vector<T> &second_moment(std::size_t i) const { return v_.at(i); }

    private:
        ParamList<T> params_;
        AdamConfig cfg_;
        std::vector<std::vector<T>> m_, v_;
        std::size_t t_ = 0;
    };

} // namespace locnet::nn

#endif
