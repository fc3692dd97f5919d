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

#include "locnet/model.hpp"

#include <stdexcept>

namespace locnet
{
    using nn::Mode;
    using nn::ParamList;
    using nn::Tensor;

    void LocNetConfig::validate() const
    {
        if (n_residual_blocks < 1)
            throw std::invalid_argument("LocNetConfig: n_residual_blocks must be >= 1");
        if (convs_per_block != 2)
            throw std::invalid_argument("LocNetConfig: convs_per_block is fixed at 2");
        if (base_channels < 1 || head_channels < 1)
            throw std::invalid_argument("LocNetConfig: channel counts must be positive");
        if (kernel_size < 1 || attention_kernel_size < 1)
            throw std::invalid_argument("LocNetConfig: kernel sizes must be positive");
        if (dilation_schedule.empty())
            throw std::invalid_argument("LocNetConfig: dilation_schedule is empty");
        for (int d : dilation_schedule)
            if (d < 1)
                throw std::invalid_argument("LocNetConfig: dilation entries must be >= 1");
        if (!(dropout_rate >= 0.0 && dropout_rate < 1.0))
            throw std::invalid_argument("LocNetConfig: dropout_rate must lie in [0, 1)");
        if (input_shape[0] == 0 || input_shape[1] == 0 || input_shape[2] == 0)
            throw std::invalid_argument("LocNetConfig: input_shape has a zero extent");
        if (output_dim != 2)
            throw std::invalid_argument("LocNetConfig: output_dim is fixed at 2");
    }

    int LocNetConfig::dilation_of_block(int block) const
    {
        if (!use_dilation)
            return 1;
        return dilation_schedule[static_cast<std::size_t>(block) % dilation_schedule.size()];
    }

    Ablation parse_ablation(std::string_view name)
    {
        if (name.empty() || name == "none")
            return Ablation::None;
        if (name == "attention")
            return Ablation::Attention;
        if (name == "dilation")
            return Ablation::Dilation;
        if (name == "both")
            return Ablation::Both;
        throw std::invalid_argument("unknown ablation '" + std::string(name) + "' (expected attention, dilation or both)");
    }

    std::string_view ablation_name(Ablation a)
    {
        switch (a)
        {
        case Ablation::None: return "none";
        case Ablation::Attention: return "attention";
        case Ablation::Dilation: return "dilation";
        case Ablation::Both: return "both";
        }
        return "none";
    }

    LocNetConfig ablated(LocNetConfig config, Ablation a)
    {
        if (a == Ablation::Attention || a == Ablation::Both)
            config.use_attention = false;
        if (a == Ablation::Dilation || a == Ablation::Both)
            config.use_dilation = false;
        return config;
    }

    LocNetConfig config_for(const LocNetConfig &base, const Dataset &data)
    {
        LocNetConfig c = base;
        c.input_shape = data.dims;
        const Hull hull = trp_hull(data.scenario);
        c.output_bias = {hull.center_x(), hull.center_y()};
        return c;
    }

    // ---------------------------------------------------------------- ResidualBlock

    template <typename T>
    ResidualBlock<T>::ResidualBlock(std::size_t channels, std::size_t kernel, std::size_t dilation)
        : conv1(channels, channels, kernel, dilation), bn1(channels), conv2(channels, channels, kernel, dilation),
          bn2(channels)
    {
    }

    template <typename T>
    Tensor<T> ResidualBlock<T>::forward(const Tensor<T> &x, Mode mode)
    {
        Tensor<T> h = relu1.forward(bn1.forward(conv1.forward(x, mode), mode), mode);
        h = relu2.forward(bn2.forward(conv2.forward(h, mode), mode), mode);
        for (std::size_t i = 0; i < h.size(); ++i)
            h.values[i] += x.values[i];
        return h;
    }

    template <typename T>
    Tensor<T> ResidualBlock<T>::backward(const Tensor<T> &grad_out)
    {
        Tensor<T> g = conv2.backward(bn2.backward(relu2.backward(grad_out)));
        g = conv1.backward(bn1.backward(relu1.backward(g)));
        for (std::size_t i = 0; i < g.size(); ++i)
            g.values[i] += grad_out.values[i];
        return g;
    }

    template <typename T>
    void ResidualBlock<T>::state(ParamList<T> &out, const std::string &prefix, bool buffers)
    {
        conv1.parameters(out, prefix + ".conv1");
        if (buffers)
            bn1.state(out, prefix + ".bn1");
        else
            bn1.parameters(out, prefix + ".bn1");
        conv2.parameters(out, prefix + ".conv2");
        if (buffers)
            bn2.state(out, prefix + ".bn2");
        else
            bn2.parameters(out, prefix + ".bn2");
    }

    // ---------------------------------------------------------------- LocNet

    namespace
    {
        std::size_t flat_features(const LocNetConfig &c)
        {
            return static_cast<std::size_t>(c.head_channels) * c.input_shape[0] * c.input_shape[1];
        }

        const LocNetConfig &checked(const LocNetConfig &c)
        {
            c.validate();
            return c;
        }
    } // namespace

    template <typename T>
    LocNet<T>::LocNet(const LocNetConfig &config, std::uint64_t seed)
        : stem_conv(checked(config).input_shape[2], static_cast<std::size_t>(config.base_channels),
                    static_cast<std::size_t>(config.kernel_size)),
          stem_bn(static_cast<std::size_t>(config.base_channels)),
          head_conv(static_cast<std::size_t>(config.base_channels), static_cast<std::size_t>(config.head_channels),
                    static_cast<std::size_t>(config.kernel_size)),
          dropout(config.dropout_rate, derive_seed(seed, stream::dropout)),
          dense(flat_features(config), static_cast<std::size_t>(config.output_dim)), config_(config)
    {
        const auto C = static_cast<std::size_t>(config.base_channels);
        const auto k = static_cast<std::size_t>(config.kernel_size);
        for (int b = 0; b < config.n_residual_blocks; ++b)
            blocks.push_back(
                std::make_unique<ResidualBlock<T>>(C, k, static_cast<std::size_t>(config.dilation_of_block(b))));
        if (config.use_attention)
            att_conv = std::make_unique<nn::Conv2d<T>>(C, C, static_cast<std::size_t>(config.attention_kernel_size));

        Rng rng = make_rng(seed, stream::init);
        stem_conv.init(rng);
        for (auto &b : blocks)
        {
            b->conv1.init(rng);
            b->conv2.init(rng);
        }
        if (att_conv)
            att_conv->init(rng);
        head_conv.init(rng);
        dense.init(rng);
        dense.bias.values[0] = static_cast<T>(config.output_bias[0]);
        dense.bias.values[1] = static_cast<T>(config.output_bias[1]);
    }

    template <typename T>
    Tensor<T> LocNet<T>::forward(const Tensor<T> &x, Mode mode)
    {
        const Shape3 &in = config_.input_shape;
        if (x.shape.size() != 4 || x.shape[0] != in[2] || x.shape[2] != in[0] || x.shape[3] != in[1])
            throw std::invalid_argument("LocNet: input " + nn::shape_string(x.shape) + " does not match {" +
                                        std::to_string(in[2]) + ", B, " + std::to_string(in[0]) + ", " +
                                        std::to_string(in[1]) + "}");
        stem_out_ = stem_relu.forward(stem_bn.forward(stem_conv.forward(x, mode), mode), mode);
        Tensor<T> h = stem_out_;
        for (auto &b : blocks)
            h = b->forward(h, mode);
        for (std::size_t i = 0; i < h.size(); ++i)
            h.values[i] += stem_out_.values[i];
        z_ = std::move(h);

        Tensor<T> gated;
        if (att_conv)
        {
            att_map_ = att_sigmoid.forward(att_conv->forward(z_, mode), mode);
            gated = Tensor<T>(z_.shape);
            for (std::size_t i = 0; i < z_.size(); ++i)
                gated.values[i] = z_.values[i] * att_map_.values[i];
        }
        else
        {
            att_map_ = Tensor<T>();
            gated = z_;
        }
        Tensor<T> f = flatten.forward(head_relu.forward(head_conv.forward(gated, mode), mode), mode);
        return dense.forward(dropout.forward(f, mode), mode);
    }

    template <typename T>
    Tensor<T> LocNet<T>::backward(const Tensor<T> &grad_out)
    {
        Tensor<T> g = flatten.backward(dropout.backward(dense.backward(grad_out)));
        g = head_conv.backward(head_relu.backward(g));

        Tensor<T> gz;
        if (att_conv)
        {
            Tensor<T> ga(z_.shape);
            for (std::size_t i = 0; i < ga.size(); ++i)
                ga.values[i] = g.values[i] * z_.values[i];
            gz = att_conv->backward(att_sigmoid.backward(ga));
            for (std::size_t i = 0; i < gz.size(); ++i)
                gz.values[i] += g.values[i] * att_map_.values[i];
        }
        else
            gz = std::move(g);

        Tensor<T> gh = gz;
        for (auto it = blocks.rbegin(); it != blocks.rend(); ++it)
            gh = (*it)->backward(gh);
        for (std::size_t i = 0; i < gh.size(); ++i)
            gh.values[i] += gz.values[i];
        return stem_conv.backward(stem_bn.backward(stem_relu.backward(gh)));
    }

    template <typename T>
    ParamList<T> LocNet<T>::parameters()
    {
        ParamList<T> out;
        stem_conv.parameters(out, "stem.conv");
        stem_bn.parameters(out, "stem.bn");
        for (std::size_t i = 0; i < blocks.size(); ++i)
            blocks[i]->state(out, "block" + std::to_string(i), false);
        if (att_conv)
            att_conv->parameters(out, "attention.conv");
        head_conv.parameters(out, "head.conv");
        dense.parameters(out, "dense");
        return out;
    }

    template <typename T>
    ParamList<T> LocNet<T>::state()
    {
        ParamList<T> out;
        stem_conv.parameters(out, "stem.conv");
        stem_bn.state(out, "stem.bn");
        for (std::size_t i = 0; i < blocks.size(); ++i)
            blocks[i]->state(out, "block" + std::to_string(i), true);
        if (att_conv)
            att_conv->parameters(out, "attention.conv");
        head_conv.parameters(out, "head.conv");
        dense.parameters(out, "dense");
        return out;
    }

    template <typename T>
    std::size_t LocNet<T>::param_count()
    {
        return nn::count_elements(parameters());
    }

    template <typename T>
    std::size_t LocNet<T>::attention_param_count() const
    {
        return att_conv ? att_conv->weight.size() + att_conv->bias.size() : 0;
    }

    template struct ResidualBlock<float>;
    template struct ResidualBlock<double>;
    template class LocNet<float>;
    template class LocNet<double>;

    std::size_t param_count(const LocNetConfig &config)
    {
        config.validate();
        const std::size_t C = static_cast<std::size_t>(config.base_channels);
        const std::size_t k2 = static_cast<std::size_t>(config.kernel_size) * static_cast<std::size_t>(config.kernel_size);
        const std::size_t ka2 = static_cast<std::size_t>(config.attention_kernel_size) *
                                static_cast<std::size_t>(config.attention_kernel_size);
        const std::size_t H = static_cast<std::size_t>(config.head_channels);
        std::size_t n = config.input_shape[2] * C * k2 + C + 2 * C;                       // stem conv + BN
        n += static_cast<std::size_t>(config.n_residual_blocks) * 2 * (C * C * k2 + C + 2 * C); // blocks
        if (config.use_attention)
            n += C * C * ka2 + C;
        n += C * H * k2 + H;                                         // head conv
        n += flat_features(config) * 2 + 2;                          // dense
        return n;
    }

    template <typename T>
    Tensor<T> make_batch(const Dataset &data, std::span<const std::size_t> indices)
    {
        const std::size_t R = data.dims[0], L = data.dims[1], C = data.dims[2], B = indices.size();
        Tensor<T> x({C, B, R, L});
        for (std::size_t b = 0; b < B; ++b)
        {
            const InputTensor &in = data.samples.at(indices[b]).input;
            if (in.dims != data.dims)
                throw std::invalid_argument("make_batch: sample shape differs from the dataset header");
            for (std::size_t r = 0; r < R; ++r)
                for (std::size_t t = 0; t < L; ++t)
                    for (std::size_t c = 0; c < C; ++c)
                        x.values[((c * B + b) * R + r) * L + t] = static_cast<T>(in.values[(r * L + t) * C + c]);
        }
        return x;
    }

    template <typename T>
    Tensor<T> make_labels(const Dataset &data, std::span<const std::size_t> indices, bool clean)
    {
        Tensor<T> y({indices.size(), 2});
        for (std::size_t b = 0; b < indices.size(); ++b)
        {
            const Sample &s = data.samples.at(indices[b]);
            y.values[2 * b] = static_cast<T>(clean ? s.meta.clean_x : s.label_x);
            y.values[2 * b + 1] = static_cast<T>(clean ? s.meta.clean_y : s.label_y);
        }
        return y;
    }

    template Tensor<float> make_batch<float>(const Dataset &, std::span<const std::size_t>);
    template Tensor<double> make_batch<double>(const Dataset &, std::span<const std::size_t>);
    template Tensor<float> make_labels<float>(const Dataset &, std::span<const std::size_t>, bool);
    template Tensor<double> make_labels<double>(const Dataset &, std::span<const std::size_t>, bool);

} // namespace locnet
