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

#ifndef LOCNET_MODEL_HPP
#define LOCNET_MODEL_HPP

#include "locnet/dataset.hpp"
#include "locnet/nn/layers.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace locnet
{
    struct LocNetConfig
    {
        int n_residual_blocks = 13;
        int convs_per_block = 2;
        int base_channels = 106; // stem and residual trunk width
        int kernel_size = 3;
        std::vector<int> dilation_schedule{1, 2, 4}; // block i uses entry i mod size
        int attention_kernel_size = 3;
        int head_channels = 8;
        double dropout_rate = 0.3;
        Shape3 input_shape{36, 256, 2}; // rows, taps, channels
        int output_dim = 2;
        std::array<double, 2> output_bias{60.0, 30.0}; // initial dense bias, usually the hull center
        bool use_attention = true;
        bool use_dilation = true;

        void validate() const;
        int dilation_of_block(int block) const;
    };

    enum class Ablation
    {
        None,
        Attention,
        Dilation,
        Both
    };

    Ablation parse_ablation(std::string_view name);
    std::string_view ablation_name(Ablation a);
    LocNetConfig ablated(LocNetConfig config, Ablation a);

    // Model input for a dataset: rows x taps x channels of its encoding, bias at the hull center.
    LocNetConfig config_for(const LocNetConfig &base, const Dataset &data);

    template <typename T>
    struct ResidualBlock
    {
        ResidualBlock(std::size_t channels, std::size_t kernel, std::size_t dilation);

        // x + relu(bn2(conv2(relu(bn1(conv1(x)))))).
        nn::Tensor<T> forward(const nn::Tensor<T> &x, nn::Mode mode);
        nn::Tensor<T> backward(const nn::Tensor<T> &grad_out);
        void state(nn::ParamList<T> &out, const std::string &prefix, bool buffers);

        nn::Conv2d<T> conv1;
        nn::BatchNorm2d<T> bn1;
        nn::ReLU<T> relu1;
        nn::Conv2d<T> conv2;
        nn::BatchNorm2d<T> bn2;
        nn::ReLU<T> relu2;
    };

    // stem conv-BN-ReLU -> residual blocks -> long skip (trunk output + stem output) ->
    // sigmoid attention gate -> head conv-ReLU -> flatten -> dropout -> dense.
    // Inputs are {channels, batch, rows, taps}; outputs {batch, 2}.
    template <typename T>
    class LocNet
    {
    public:
        LocNet(const LocNetConfig &config, std::uint64_t seed);

        nn::Tensor<T> forward(const nn::Tensor<T> &x, nn::Mode mode);
        // Accumulates parameter gradients, returns dL/dx.
        nn::Tensor<T> backward(const nn::Tensor<T> &grad_out);

        nn::ParamList<T> parameters();
        // Parameters plus batch-norm running statistics.
        nn::ParamList<T> state();
        std::size_t param_count();

        const LocNetConfig &config() const { return config_; }
        std::size_t attention_param_count() const;

        // Intermediates of the last forward pass.
        const nn::Tensor<T> &stem_output() const { return stem_out_; }
        const nn::Tensor<T> &attention_input() const { return z_; }
        const nn::Tensor<T> &attention_map() const { return att_map_; }

        nn::Conv2d<T> stem_conv;
        nn::BatchNorm2d<T> stem_bn;
        nn::ReLU<T> stem_relu;
        std::vector<std::unique_ptr<ResidualBlock<T>>> blocks;
        std::unique_ptr<nn::Conv2d<T>> att_conv; // null when attention is ablated
        nn::Sigmoid<T> att_sigmoid;
        nn::Conv2d<T> head_conv;
        nn::ReLU<T> head_relu;
        nn::Flatten<T> flatten;
        nn::Dropout<T> dropout;
        nn::Dense<T> dense;

    private:
        LocNetConfig config_;
        nn::Tensor<T> stem_out_, z_, att_map_;
    };

    extern template struct ResidualBlock<float>;
    extern template struct ResidualBlock<double>;
    extern template class LocNet<float>;
    extern template class LocNet<double>;

    // Parameter count of a freshly built model, without allocating activations.
    std::size_t param_count(const LocNetConfig &config);

    // Packs samples into a {channels, B, rows, taps} tensor and {B, 2} labels.
    template <typename T>
    nn::Tensor<T> make_batch(const Dataset &data, std::span<const std::size_t> indices);
    template <typename T>
    nn::Tensor<T> make_labels(const Dataset &data, std::span<const std::size_t> indices, bool clean = false);

} // namespace locnet

#endif
