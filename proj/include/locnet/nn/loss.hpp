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

#ifndef LOCNET_NN_LOSS_HPP
#define LOCNET_NN_LOSS_HPP

#include "locnet/nn/tensor.hpp"

#include <cmath>

namespace locnet::nn
{
    // Mean over the batch of 0.5 * |pred - truth| for {B, 2} tensors. When `grad` is given it
    // receives dL/dpred; items with exactly zero error contribute a zero gradient.
    template <typename T>
    T euclidean_loss(const Tensor<T> &pred, const Tensor<T> &truth, Tensor<T> *grad = nullptr)
    {
        require_same_shape(pred, truth, "euclidean_loss");
        if (pred.shape.size() != 2 || pred.shape[1] != 2 || pred.shape[0] == 0)
            throw std::invalid_argument("euclidean_loss: expected {B, 2} tensors, got " + shape_string(pred.shape));
        const std::size_t B = pred.shape[0];
        if (grad)
            *grad = Tensor<T>(pred.shape);
        double total = 0.0;
        for (std::size_t b = 0; b < B; ++b)
        {
            const double ex = static_cast<double>(pred.values[2 * b]) - truth.values[2 * b];
            const double ey = static_cast<double>(pred.values[2 * b + 1]) - truth.values[2 * b + 1];
            const double norm = std::hypot(ex, ey);
            total += 0.5 * norm;
            if (grad && norm > 0.0)
            {
                const double s = 0.5 / (norm * static_cast<double>(B));
                grad->values[2 * b] = static_cast<T>(s * ex);
                grad->values[2 * b + 1] = static_cast<T>(s * ey);
            }
        }
        return static_cast<T>(total / static_cast<double>(B));
    }

    // Sum of all elements; gradient is all ones.
    template <typename T>
    T sum_loss(const Tensor<T> &x, Tensor<T> *grad = nullptr)
    {
        double s = 0.0;
        for (T v : x.values)
            s += v;
        if (grad)
            *grad = Tensor<T>(x.shape, T(1));
        return static_cast<T>(s);
    }

} // namespace locnet::nn

#endif
