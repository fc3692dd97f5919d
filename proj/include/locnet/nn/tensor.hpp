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

#ifndef LOCNET_NN_TENSOR_HPP
#define LOCNET_NN_TENSOR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace locnet::nn
{
    using Shape = std::vector<std::size_t>;

    inline std::size_t numel(const Shape &s)
    {
        return std::accumulate(s.begin(), s.end(), std::size_t{1}, std::multiplies<>());
    }

    std::string shape_string(const Shape &s);

    // Dense row-major array. Feature maps use the {channels, batch, height, width} layout so that
    // a whole minibatch convolves as one matrix product; flat features use {batch, features}.
    template <typename T>
    struct Tensor
    {
        Shape shape;
        std::vector<T> values;
        std::vector<T> grad; // allocated for parameters only
        bool requires_grad = false;

        Tensor() = default;

        explicit Tensor(Shape s, T fill = T(0), bool with_grad = false)
            : shape(std::move(s)), values(numel(shape), fill), requires_grad(with_grad)
        {
            if (with_grad)
                grad.assign(values.size(), T(0));
        }

        std::size_t size() const { return values.size(); }
        std::size_t dim(std::size_t i) const { return shape.at(i); }
        T *data() { return values.data(); }
        const T *data() const { return values.data(); }

        void zero_grad()
        {
            std::fill(grad.begin(), grad.end(), T(0));
        }

        bool all_finite() const
        {
            return std::all_of(values.begin(), values.end(), [](T v) { return std::isfinite(v); });
        }
    };

    template <typename T>
    void require_same_shape(const Tensor<T> &a, const Tensor<T> &b, const char *where)
    {
        if (a.shape != b.shape)
            throw std::invalid_argument(std::string(where) + ": shape mismatch " + shape_string(a.shape) + " vs " +
                                        shape_string(b.shape));
    }

    // Named handle on a tensor owned by a layer.
    template <typename T>
    struct NamedTensor
    {
        std::string name;
        Tensor<T> *tensor;
    };

    template <typename T>
    using ParamList = std::vector<NamedTensor<T>>;

    template <typename T>
    std::size_t count_elements(const ParamList<T> &params)
    {
        std::size_t n = 0;
        for (const auto &p : params)
            n += p.tensor->size();
        return n;
    }

    template <typename T>
    void zero_grads(const ParamList<T> &params)
    {
        for (const auto &p : params)
            p.tensor->zero_grad();
    }

} // namespace locnet::nn

#endif
