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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <random>

using namespace locnet;
using namespace locnet::nn;
using Catch::Approx;

namespace
{
    LocNetConfig tiny()
    {
        LocNetConfig c;
        c.n_residual_blocks = 2;
        c.base_channels = 4;
        c.head_channels = 2;
        c.input_shape = {4, 8, 2};
        return c;
    }

    template <typename T>
    Tensor<T> random_input(const LocNetConfig &c, std::size_t batch, std::uint64_t seed)
    {
        Tensor<T> x({c.input_shape[2], batch, c.input_shape[0], c.input_shape[1]});
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> g;
        for (auto &v : x.values)
            v = static_cast<T>(g(rng));
        return x;
    }

    template <typename T>
    void silence_block(ResidualBlock<T> &b)
    {
        std::fill(b.bn2.gamma.values.begin(), b.bn2.gamma.values.end(), T(0));
        std::fill(b.bn2.beta.values.begin(), b.bn2.beta.values.end(), T(0));
    }
} // namespace

TEST_CASE("layer parameter counts", "[model]")
{
    Dense<float> d(10, 2);
    ParamList<float> pd;
    d.parameters(pd, "d");
    CHECK(count_elements(pd) == 22);
    Conv2d<float> c(4, 8, 3);
    ParamList<float> pc;
    c.parameters(pc, "c");
    CHECK(count_elements(pc) == 296);
}

TEST_CASE("full-size model lands near three million parameters", "[model]")
{
    const LocNetConfig c;
    const std::size_t n = param_count(c);
    CHECK(n >= 2'500'000);
    CHECK(n <= 3'300'000);
}

TEST_CASE("closed-form parameter count matches the built model", "[model]")
{
    for (Ablation a : {Ablation::None, Ablation::Attention, Ablation::Dilation, Ablation::Both})
    {
        const LocNetConfig c = ablated(tiny(), a);
        LocNet<float> m(c, 1);
        CHECK(m.param_count() == param_count(c));
    }
}

TEST_CASE("attention ablation removes exactly the gate parameters", "[model]")
{
    LocNetConfig c = tiny();
    c.base_channels = 6;
    LocNet<float> full(c, 1);
    LocNet<float> gated_off(ablated(c, Ablation::Attention), 1);
    CHECK(full.attention_param_count() == 6 * 6 * 9 + 6);
    CHECK(full.param_count() - gated_off.param_count() == full.attention_param_count());
    CHECK(gated_off.att_conv == nullptr);

    LocNet<float> no_dil(ablated(c, Ablation::Dilation), 1);
    CHECK(no_dil.param_count() == full.param_count());
    for (const auto &b : no_dil.blocks)
        CHECK(b->conv1.dilation() == 1);
}

TEST_CASE("ablation names", "[model]")
{
    for (Ablation a : {Ablation::None, Ablation::Attention, Ablation::Dilation, Ablation::Both})
        CHECK(parse_ablation(ablation_name(a)) == a);
    CHECK_THROWS_AS(parse_ablation("everything"), std::invalid_argument);
}

TEST_CASE("dilation schedule cycles over blocks", "[model]")
{
    LocNetConfig c = tiny();
    c.n_residual_blocks = 5;
    LocNet<float> m(c, 1);
    const std::vector<std::size_t> expected{1, 2, 4, 1, 2};
    for (std::size_t i = 0; i < 5; ++i)
    {
        CHECK(m.blocks[i]->conv1.dilation() == expected[i]);
        CHECK(m.blocks[i]->conv2.dilation() == expected[i]);
    }
}

TEST_CASE("attention gate", "[model]")
{
    LocNetConfig c = tiny();
    LocNet<double> m(c, 3);
    const auto x = random_input<double>(c, 3, 1);

    m.forward(x, Mode::Eval);
    const auto &a = m.attention_map();
    REQUIRE(a.shape == m.attention_input().shape);
    for (double v : a.values)
    {
        REQUIRE(v > 0.0);
        REQUIRE(v < 1.0);
    }

    std::fill(m.att_conv->weight.values.begin(), m.att_conv->weight.values.end(), 0.0);
    m.forward(x, Mode::Eval);
    for (double v : m.attention_map().values)
        REQUIRE(v == 0.5);

    LocNet<double> none(ablated(c, Ablation::Both), 3);
    none.forward(x, Mode::Eval);
    CHECK(none.attention_map().size() == 0);
    CHECK(none.attention_input().size() == x.dim(1) * 4 * 4 * 8);
}

TEST_CASE("silenced residual block is the identity", "[model]")
{
    ResidualBlock<double> b(3, 3, 2);
    Rng rng(5);
    b.conv1.init(rng);
    b.conv2.init(rng);
    silence_block(b);
    Tensor<double> x({3, 2, 4, 5});
    std::mt19937_64 g(6);
    std::normal_distribution<double> n;
    for (auto &v : x.values)
        v = n(g);
    CHECK(b.forward(x, Mode::Train).values == x.values);
}

TEST_CASE("long skip doubles the stem output when every block is silent", "[model]")
{
    LocNetConfig c = tiny();
    LocNet<double> m(c, 4);
    for (auto &b : m.blocks)
        silence_block(*b);
    m.forward(random_input<double>(c, 2, 2), Mode::Eval);
    const auto &stem = m.stem_output();
    const auto &z = m.attention_input();
    REQUIRE(z.shape == stem.shape);
    for (std::size_t i = 0; i < z.size(); ++i)
        REQUIRE(z.values[i] == 2.0 * stem.values[i]);
}

TEST_CASE("zero dense weights return the bias", "[model]")
{
    LocNetConfig c = tiny();
    LocNet<float> m(c, 7);
    std::fill(m.dense.weight.values.begin(), m.dense.weight.values.end(), 0.0f);
    const auto y = m.forward(random_input<float>(c, 3, 3), Mode::Eval);
    REQUIRE(y.shape == Shape{3, 2});
    for (std::size_t b = 0; b < 3; ++b)
    {
        CHECK(y.values[2 * b] == 60.0f);
        CHECK(y.values[2 * b + 1] == 30.0f);
    }
}

TEST_CASE("eval outputs do not depend on batch composition", "[model]")
{
    LocNetConfig c = tiny();
    LocNet<float> m(c, 8);
    const auto x = random_input<float>(c, 8, 4);
    const auto all = m.forward(x, Mode::Eval);
    REQUIRE(all.all_finite());

    const std::size_t per = x.size() / x.dim(0) / 8; // values per item per channel
    for (std::size_t item = 0; item < 8; ++item)
    {
        Tensor<float> one({x.dim(0), 1, x.dim(2), x.dim(3)});
        for (std::size_t ch = 0; ch < x.dim(0); ++ch)
            std::copy_n(x.values.begin() + static_cast<std::ptrdiff_t>((ch * 8 + item) * per), per,
                        one.values.begin() + static_cast<std::ptrdiff_t>(ch * per));
        const auto y = m.forward(one, Mode::Eval);
        CHECK(std::abs(y.values[0] - all.values[2 * item]) < 1e-5 * std::max(1.0f, std::abs(y.values[0])));
        CHECK(std::abs(y.values[1] - all.values[2 * item + 1]) < 1e-5 * std::max(1.0f, std::abs(y.values[1])));
    }

    // Reversed batch gives reversed outputs.
    Tensor<float> rev(x.shape);
    for (std::size_t ch = 0; ch < x.dim(0); ++ch)
        for (std::size_t item = 0; item < 8; ++item)
            std::copy_n(x.values.begin() + static_cast<std::ptrdiff_t>((ch * 8 + item) * per), per,
                        rev.values.begin() + static_cast<std::ptrdiff_t>((ch * 8 + 7 - item) * per));
    const auto yr = m.forward(rev, Mode::Eval);
    for (std::size_t item = 0; item < 8; ++item)
        for (std::size_t k = 0; k < 2; ++k)
            CHECK(std::abs(yr.values[2 * (7 - item) + k] - all.values[2 * item + k]) < 1e-4);
}

TEST_CASE("same seed builds the same model", "[model]")
{
    LocNetConfig c = tiny();
    LocNet<float> a(c, 11), b(c, 11), other(c, 12);
    const auto pa = a.parameters(), pb = b.parameters(), po = other.parameters();
    REQUIRE(pa.size() == pb.size());
    bool differs = false;
    for (std::size_t i = 0; i < pa.size(); ++i)
    {
        CHECK(pa[i].name == pb[i].name);
        CHECK(pa[i].tensor->values == pb[i].tensor->values);
        differs = differs || pa[i].tensor->values != po[i].tensor->values;
    }
    CHECK(differs);
}

TEST_CASE("state includes batch-norm buffers", "[model]")
{
    LocNetConfig c = tiny();
    LocNet<float> m(c, 1);
    const std::size_t n_bn = 1 + 2 * static_cast<std::size_t>(c.n_residual_blocks);
    CHECK(count_elements(m.state()) == m.param_count() + n_bn * 2 * static_cast<std::size_t>(c.base_channels));
}

TEST_CASE("model rejects malformed input", "[model]")
{
    LocNetConfig c = tiny();
    LocNet<float> m(c, 1);
    CHECK_THROWS_AS(m.forward(Tensor<float>({3, 1, 4, 8}), Mode::Eval), std::invalid_argument);
    LocNetConfig bad = c;
    bad.dropout_rate = 1.0;
    CHECK_THROWS_AS(LocNet<float>(bad, 1), std::invalid_argument);
    bad = c;
    bad.dilation_schedule.clear();
    CHECK_THROWS_AS(param_count(bad), std::invalid_argument);
}

TEST_CASE("training-mode outputs are finite for large inputs", "[model]")
{
    LocNetConfig c = tiny();
    LocNet<float> m(c, 9);
    auto x = random_input<float>(c, 4, 10);
    for (auto &v : x.values)
        v *= 1e3f;
    CHECK(m.forward(x, Mode::Train).all_finite());
}
