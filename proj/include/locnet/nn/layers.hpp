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

#ifndef LOCNET_NN_LAYERS_HPP
#define LOCNET_NN_LAYERS_HPP

#include "locnet/nn/tensor.hpp"
#include "locnet/rng.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace locnet::nn
{
    enum class Mode
    {
        Train,
        Eval
    };

    // A layer caches what its backward pass needs during forward. backward() takes dL/d(output),
    // adds the parameter gradients into Tensor::grad and returns dL/d(input). Calling backward
    // twice without zeroing therefore doubles every parameter gradient.
    template <typename T>
    class Layer
    {
    public:
        virtual ~Layer() = default;

        virtual std::string_view kind() const = 0;
        virtual Tensor<T> forward(const Tensor<T> &x, Mode mode) = 0;
        virtual Tensor<T> backward(const Tensor<T> &grad_out) = 0;

        // Learnable tensors.
        virtual void parameters(ParamList<T> &, const std::string &) {}
        // Learnable tensors plus buffers such as running statistics (what a checkpoint stores).
        virtual void state(ParamList<T> &out, const std::string &prefix) { parameters(out, prefix); }
    };

    // Same-padded, stride-1, dilated 2-D convolution over {C, B, H, W} feature maps.
    // Weight layout {C_out, C_in, k, k}. Padding is symmetric with the odd pixel on the high side.
    template <typename T>
    class Conv2d final : public Layer<T>
    {
    public:
        Conv2d(std::size_t c_in, std::size_t c_out, std::size_t kernel, std::size_t dilation = 1);

        std::string_view kind() const override { return "conv2d"; }
        Tensor<T> forward(const Tensor<T> &x, Mode mode) override;
        Tensor<T> backward(const Tensor<T> &grad_out) override;
        void parameters(ParamList<T> &out, const std::string &prefix) override;

        // He-normal weights, zero bias.
        void init(Rng &rng);

        std::size_t in_channels() const { return c_in_; }
        std::size_t out_channels() const { return c_out_; }
        std::size_t kernel() const { return k_; }
        std::size_t dilation() const { return dilation_; }
        std::size_t pad_low() const { return dilation_ * (k_ - 1) / 2; }

        Tensor<T> weight;
        Tensor<T> bias;

    private:
        std::size_t c_in_, c_out_, k_, dilation_;
        bool use_im2col() const { return c_in_ < 8; }

        Shape in_shape_;
        // Last input: as given on the im2col path (narrow inputs), zero-padded on the shifted-GEMM path.
        std::vector<T> saved_;
    };

    // Per-channel normalization over batch and spatial axes.
    template <typename T>
    class BatchNorm2d final : public Layer<T>
    {
    public:
        explicit BatchNorm2d(std::size_t channels, double momentum = 0.1, double eps = 1e-5);

        std::string_view kind() const override { return "batchnorm2d"; }
        Tensor<T> forward(const Tensor<T> &x, Mode mode) override;
        Tensor<T> backward(const Tensor<T> &grad_out) override;
        void parameters(ParamList<T> &out, const std::string &prefix) override;
        void state(ParamList<T> &out, const std::string &prefix) override;

        Tensor<T> gamma;
        Tensor<T> beta;
        Tensor<T> running_mean;
        Tensor<T> running_var;

    private:
        std::size_t channels_;
        double momentum_, eps_;
        Mode last_mode_ = Mode::Train;
        Shape in_shape_;
        std::vector<T> xhat_;
        std::vector<T> inv_std_;
    };

    template <typename T>
    class ReLU final : public Layer<T>
    {
    public:
        std::string_view kind() const override { return "relu"; }
        Tensor<T> forward(const Tensor<T> &x, Mode mode) override;
        Tensor<T> backward(const Tensor<T> &grad_out) override;

        // Which inputs of the last forward were positive.
        const std::vector<unsigned char> &mask() const { return active_; }

    private:
        std::vector<unsigned char> active_;
        Shape shape_;
    };

    // Output clamped to the open interval (0, 1) so saturation never yields exactly 0 or 1.
    template <typename T>
    class Sigmoid final : public Layer<T>
    {
    public:
        std::string_view kind() const override { return "sigmoid"; }
        Tensor<T> forward(const Tensor<T> &x, Mode mode) override;
        Tensor<T> backward(const Tensor<T> &grad_out) override;

    private:
        Tensor<T> out_;
    };

    // {C, B, H, W} -> {B, C*H*W}, per-item order (c, h, w).
    template <typename T>
    class Flatten final : public Layer<T>
    {
    public:
        std::string_view kind() const override { return "flatten"; }
        Tensor<T> forward(const Tensor<T> &x, Mode mode) override;
        Tensor<T> backward(const Tensor<T> &grad_out) override;

    private:
        Shape in_shape_;
    };

    // Inverted dropout: survivors scaled by 1 / (1 - rate) in training, identity in eval.
    template <typename T>
    class Dropout final : public Layer<T>
    {
    public:
        Dropout(double rate, std::uint64_t seed);

        std::string_view kind() const override { return "dropout"; }
        Tensor<T> forward(const Tensor<T> &x, Mode mode) override;
        Tensor<T> backward(const Tensor<T> &grad_out) override;

        double rate() const { return rate_; }
        void reseed(std::uint64_t seed) { rng_.seed(seed); }
        // Reuse the previous mask on the next training forward (finite-difference checks).
        void freeze_mask(bool frozen) { frozen_ = frozen; }

    private:
        double rate_;
        Rng rng_;
        bool frozen_ = false;
        Mode last_mode_ = Mode::Eval;
        std::vector<T> scale_;
    };

    // {B, F_in} -> {B, F_out}; weight {F_out, F_in}.
    template <typename T>
    class Dense final : public Layer<T>
    {
    public:
        Dense(std::size_t in_features, std::size_t out_features);

        std::string_view kind() const override { return "dense"; }
        Tensor<T> forward(const Tensor<T> &x, Mode mode) override;
        Tensor<T> backward(const Tensor<T> &grad_out) override;
        void parameters(ParamList<T> &out, const std::string &prefix) override;

        // Glorot-uniform weights, zero bias.
        void init(Rng &rng);

        Tensor<T> weight;
        Tensor<T> bias;

    private:
        std::size_t in_, out_;
        Tensor<T> input_;
    };

    // Plain layer stack.
    template <typename T>
    class Sequential
    {
    public:
        Sequential() = default;

        template <typename L, typename... Args>
        L &add(Args &&...args)
        {
            auto layer = std::make_unique<L>(std::forward<Args>(args)...);
            L &ref = *layer;
            layers_.push_back(std::move(layer));
            return ref;
        }

        Tensor<T> forward(const Tensor<T> &x, Mode mode);
        Tensor<T> backward(const Tensor<T> &grad_out);
        ParamList<T> parameters();
        std::size_t size() const { return layers_.size(); }
        Layer<T> &at(std::size_t i) { return *layers_.at(i); }

    private:
        std::vector<std::unique_ptr<Layer<T>>> layers_;
    };

    extern template class Conv2d<float>;
    extern template class Conv2d<double>;
    extern template class BatchNorm2d<float>;
    extern template class BatchNorm2d<double>;
    extern template class ReLU<float>;
    extern template class ReLU<double>;
    extern template class Sigmoid<float>;
    extern template class Sigmoid<double>;
    extern template class Flatten<float>;
    extern template class Flatten<double>;
    extern template class Dropout<float>;
    extern template class Dropout<double>;
    extern template class Dense<float>;
    extern template class Dense<double>;
    extern template class Sequential<float>;
    extern template class Sequential<double>;

} // namespace locnet::nn

#endif
