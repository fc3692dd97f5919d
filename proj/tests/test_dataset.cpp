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

#include "locnet/dataset.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

using namespace locnet;
using Catch::Approx;

namespace
{
    ScenarioConfig layout(int n_trp, int taps)
    {
        ScenarioConfig c;
        c.n_trp = n_trp;
        c.grid_rows = n_trp >= 6 ? (n_trp % 3 == 0 ? 3 : 2) : 1;
        c.grid_cols = n_trp / c.grid_rows;
        c.cir_taps = taps;
        c.n_subcarriers = std::max(taps, 64);
        return c;
    }

    std::vector<ChannelRealization> random_links(const ScenarioConfig &c, Rng &rng)
    {
        std::normal_distribution<double> g;
        std::vector<ChannelRealization> links(static_cast<std::size_t>(c.n_trp));
        for (auto &l : links)
        {
            l.cir.resize(static_cast<std::size_t>(c.cir_taps));
            const double scale = std::pow(10.0, g(rng) - 4.0);
            for (auto &v : l.cir)
                v = cdouble(g(rng), g(rng)) * scale;
            l.rsrp_dbm = rsrp_dbm(l.cir);
        }
        return links;
    }

    double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
    double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
} // namespace

TEST_CASE("encoding names round trip", "[dataset]")
{
    for (Encoding e : {Encoding::Cir, Encoding::CirRsrp, Encoding::CirRsrpRatio})
    {
        CHECK(parse_encoding(encoding_name(e)) == e);
        CHECK(encoding_from_id(static_cast<std::uint8_t>(e)) == e);
    }
    CHECK_THROWS_AS(parse_encoding("rsrp"), std::invalid_argument);
    CHECK_THROWS_AS(encoding_from_id(9), std::invalid_argument);
}

TEST_CASE("encoder output shapes", "[dataset]")
{
    for (auto [n, l] : {std::pair{18, 256}, std::pair{8, 64}, std::pair{2, 4}})
    {
        const auto un = static_cast<std::uint32_t>(n), ul = static_cast<std::uint32_t>(l);
        CHECK(encoded_shape(Encoding::Cir, n, l) == Shape3{un, ul, 2});
        CHECK(encoded_shape(Encoding::CirRsrp, n, l) == Shape3{2 * un, ul, 2});
        CHECK(encoded_shape(Encoding::CirRsrpRatio, n, l) == Shape3{2 * un, ul, 3});
    }
}

TEST_CASE("CIR encoding splits real and imaginary parts", "[dataset]")
{
    const ScenarioConfig c;
    std::vector<ChannelRealization> links(18);
    for (auto &l : links)
        l.cir.assign(256, cdouble(0.0, 0.0));
    const InputTensor zero = encode_cir(links, c);
    CHECK(zero.dims == Shape3{18, 256, 2});
    CHECK(std::all_of(zero.values.begin(), zero.values.end(), [](float v) { return v == 0.0f; }));

    links[0].cir[0] = cdouble(1.0, 2.0);
    const InputTensor t = encode_cir(links, c);
    CHECK(t.at(0, 0, 0) == 1.0f * cir_input_gain);
    CHECK(t.at(0, 0, 1) == 2.0f * cir_input_gain);
    for (std::size_t k = 1; k < 256; ++k)
    {
        REQUIRE(t.at(0, k, 0) == 0.0f);
        REQUIRE(t.at(0, k, 1) == 0.0f);
    }
}

TEST_CASE("decoding recovers the single-precision CIR exactly", "[dataset]")
{
    Rng rng(8);
    const ScenarioConfig c = layout(8, 64);
    for (Encoding e : {Encoding::Cir, Encoding::CirRsrp, Encoding::CirRsrpRatio})
    {
        const auto links = random_links(c, rng);
        const auto cirs = decode_cir(encode(e, links, 8, c), e);
        REQUIRE(cirs.size() == 8);
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t k = 0; k < 64; ++k)
            {
                REQUIRE(cirs[i][k].real() == static_cast<double>(static_cast<float>(links[i].cir[k].real())));
                REQUIRE(cirs[i][k].imag() == static_cast<double>(static_cast<float>(links[i].cir[k].imag())));
            }
    }
}

TEST_CASE("CIR+RSRP interleaves constant RSRP rows", "[dataset]")
{
    Rng rng(12);
    const ScenarioConfig c = layout(2, 4);
    const auto links = random_links(c, rng);
    const RsrpScaling scaling;
    const InputTensor t = encode_cir_rsrp(links, c, scaling);
    REQUIRE(t.dims == Shape3{4, 4, 2});
    for (std::size_t i = 0; i < 2; ++i)
    {
        // Row 2i is the CIR, row 2i+1 its RSRP.
        CHECK(t.at(2 * i, 1, 0) == static_cast<float>(links[i].cir[1].real()) * cir_input_gain);
        const float v = t.at(2 * i + 1, 0, 0);
        for (std::size_t k = 0; k < 4; ++k)
            for (std::size_t ch = 0; ch < 2; ++ch)
                REQUIRE(t.at(2 * i + 1, k, ch) == v);
        // Recompute RSRP from the decoded CIR.
        const auto cir = decode_cir(t, Encoding::CirRsrp)[i];
        CHECK(std::abs(v - (rsrp_dbm(cir) + 100.0) / 50.0) < 1e-6);
    }
}

TEST_CASE("TRP-ratio channel is uniform", "[dataset]")
{
    Rng rng(13);
    const ScenarioConfig c;
    const auto links = random_links(c, rng);
    for (auto [avail, ratio] : {std::pair{18, 1.0f}, std::pair{9, 0.5f}})
    {
        const InputTensor t = encode_cir_rsrp_ratio(links, avail, c);
        REQUIRE(t.dims == Shape3{36, 256, 3});
        float lo = 1e9f, hi = -1e9f;
        for (std::size_t r = 0; r < 36; ++r)
            for (std::size_t k = 0; k < 256; ++k)
            {
                lo = std::min(lo, t.at(r, k, 2));
                hi = std::max(hi, t.at(r, k, 2));
            }
        CHECK(lo == ratio);
        CHECK(hi - lo == 0.0f);
    }
    CHECK_THROWS_AS(encode_cir_rsrp_ratio(links, 0, c), std::invalid_argument);
    CHECK_THROWS_AS(encode_cir_rsrp_ratio(links, 19, c), std::invalid_argument);
}

TEST_CASE("masking keeps the strongest TRPs", "[dataset]")
{
    const ScenarioConfig c;
    Rng rng(14);

    SECTION("all available is the identity")
    {
        const auto links = random_links(c, rng);
        const auto out = mask_trps(links, 18);
        for (std::size_t i = 0; i < 18; ++i)
        {
            CHECK(out[i].cir == links[i].cir);
            CHECK(out[i].rsrp_dbm == links[i].rsrp_dbm);
        }
    }

    SECTION("decreasing RSRP keeps the first four")
    {
        auto links = random_links(c, rng);
        for (std::size_t i = 0; i < 18; ++i)
            links[i].rsrp_dbm = -40.0 - static_cast<double>(i);
        const auto out = mask_trps(links, 4);
        for (std::size_t i = 0; i < 18; ++i)
        {
            if (i < 4)
            {
                CHECK(out[i].cir == links[i].cir);
                continue;
            }
            CHECK(out[i].rsrp_dbm == -500.0);
            CHECK(std::all_of(out[i].cir.begin(), out[i].cir.end(), [](cdouble v) { return v == cdouble(0, 0); }));
        }
        // The sentinel maps to a fixed out-of-range input value.
        const InputTensor t = encode_cir_rsrp(out, c);
        CHECK(t.at(2 * 17 + 1, 0, 0) == -8.0f);
    }

    SECTION("kept set equals a sort oracle")
    {
        for (int trial = 0; trial < 200; ++trial)
        {
            const auto links = random_links(c, rng);
            const int n = 4 + trial % 14;
            std::vector<std::pair<double, int>> by_power;
            for (int i = 0; i < 18; ++i)
                by_power.push_back({-links[static_cast<std::size_t>(i)].rsrp_dbm, i});
            std::sort(by_power.begin(), by_power.end());
            std::set<int> oracle;
            for (int i = 0; i < n; ++i)
                oracle.insert(by_power[static_cast<std::size_t>(i)].second);
            const auto kept = top_rsrp_indices(links, n);
            REQUIRE(std::set<int>(kept.begin(), kept.end()) == oracle);
            const auto out = mask_trps(links, n);
            for (int i = 0; i < 18; ++i)
            {
                const auto ui = static_cast<std::size_t>(i);
                if (oracle.count(i))
                    REQUIRE(out[ui].cir == links[ui].cir);
                else
                    REQUIRE(out[ui].rsrp_dbm == rsrp_sentinel_dbm);
            }
        }
    }
}

TEST_CASE("label noise is a truncated Gaussian", "[dataset]")
{
    Rng rng(15);
    CHECK(add_label_noise({3.0, 4.0}, 0.0, rng) == std::pair{3.0, 4.0});
    CHECK_THROWS_AS(truncated_gaussian_offset(-0.1, rng), std::invalid_argument);

    const double sigma = 0.5;
    const int n = 100000;
    double s2 = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const double o = truncated_gaussian_offset(sigma, rng);
        REQUIRE(std::abs(o) <= 2.0 * sigma);
        s2 += o * o;
    }
    const double expected =
        sigma * std::sqrt(1.0 - 2.0 * 2.0 * normal_pdf(2.0) / (normal_cdf(2.0) - normal_cdf(-2.0)));
    CHECK(std::sqrt(s2 / n) == Approx(expected).epsilon(0.05));
}

TEST_CASE("sample plans", "[dataset]")
{
    const auto trp = default_variable_trp_plan(18, 80000);
    std::map<int, std::size_t> hist;
    for (const auto &e : trp)
        hist[e.n_available] += e.count;
    for (int n = 4; n <= 17; ++n)
        CHECK(hist[n] == 2500);
    CHECK(hist[18] == 45000);

    const auto noise = standard_label_noise_plan(80000);
    REQUIRE(noise.size() == 5);
    for (const auto &e : noise)
        CHECK(e.count == 16000);
    CHECK(noise.front().sigma_m == 0.1);
    CHECK(noise.back().sigma_m == 1.0);
}

TEST_CASE("split sizes and partitions", "[dataset]")
{
    const SplitFractions f;
    const auto big = split_sizes(80000, f);
    CHECK(big.train == 51200);
    CHECK(big.validation == 12800);
    CHECK(big.test == 16000);
    const auto small = split_sizes(10, f);
    CHECK(small.train == 6);
    CHECK(small.validation == 2);
    CHECK(small.test == 2);

    Rng rng(16);
    const auto idx = split(1000, f, rng);
    std::vector<std::size_t> all;
    all.insert(all.end(), idx.train.begin(), idx.train.end());
    all.insert(all.end(), idx.validation.begin(), idx.validation.end());
    all.insert(all.end(), idx.test.begin(), idx.test.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expect(1000);
    std::iota(expect.begin(), expect.end(), std::size_t{0});
    CHECK(all == expect);
    CHECK_THROWS_AS(split(2, f, rng), std::invalid_argument);
}

TEST_CASE("generated datasets honour their plans", "[dataset]")
{
    ScenarioConfig c = layout(18, 16);
    c.n_subcarriers = 256;
    DatasetSpec spec;
    spec.encoding = Encoding::CirRsrpRatio;
    spec.total_samples = 300;
    spec.variable_trp_plan = {{4, 100}, {12, 100}, {18, 100}};
    spec.label_noise_plan = {{0.0, 150}, {1.0, 150}};
    spec.rng_seed = 5;
    const Dataset d = build_dataset(spec, c);
    REQUIRE(d.size() == 300);
    const Hull hull = trp_hull(c);
    std::map<int, int> avail;
    std::set<std::pair<float, float>> labels;
    for (const auto &s : d.samples)
    {
        REQUIRE(s.input.dims == Shape3{36, 16, 3});
        ++avail[s.meta.n_trp_available];
        int live_rows = 0;
        for (std::size_t i = 0; i < 18; ++i)
            live_rows += s.input.at(2 * i + 1, 0, 0) != -8.0f;
        REQUIRE(live_rows == s.meta.n_trp_available);
        REQUIRE(s.input.at(0, 0, 2) == Approx(s.meta.n_trp_available / 18.0));
        REQUIRE(hull.contains(s.meta.clean_x, s.meta.clean_y));
        const double sigma = s.meta.noise_sigma_m;
        REQUIRE(std::abs(s.label_x - s.meta.clean_x) <= 2.0 * sigma + 1e-5);
        REQUIRE(std::abs(s.label_y - s.meta.clean_y) <= 2.0 * sigma + 1e-5);
        if (sigma == 0.0)
            REQUIRE(s.label_x == s.meta.clean_x);
        labels.insert({s.meta.clean_x, s.meta.clean_y});
    }
    CHECK(avail == std::map<int, int>{{4, 100}, {12, 100}, {18, 100}});
    CHECK(labels.size() == 300);
}

TEST_CASE("all-available dataset", "[dataset]")
{
    ScenarioConfig c = layout(18, 16);
    c.n_subcarriers = 256;
    DatasetSpec spec;
    spec.encoding = Encoding::CirRsrpRatio;
    spec.total_samples = 10;
    const Dataset d = build_dataset(spec, c);
    REQUIRE(d.size() == 10);
    for (const auto &s : d.samples)
    {
        CHECK(s.meta.n_trp_available == 18);
        CHECK(s.input.at(5, 3, 2) == 1.0f);
    }
}

TEST_CASE("generation is deterministic and thread-count independent", "[dataset]")
{
    ScenarioConfig c = layout(8, 32);
    c.n_subcarriers = 512;
    DatasetSpec spec;
    spec.total_samples = 600;
    spec.rng_seed = 42;
    spec.variable_trp_plan = {{4, 300}, {8, 300}};
    const Dataset a = build_dataset(spec, c, 1);
    const Dataset b = build_dataset(spec, c, 3);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        REQUIRE(a.samples[i].input.values == b.samples[i].input.values);
        REQUIRE(a.samples[i].label_x == b.samples[i].label_x);
        REQUIRE(a.samples[i].meta.seed_trace == b.samples[i].meta.seed_trace);
    }
    spec.rng_seed = 43;
    const Dataset other = build_dataset(spec, c, 1);
    CHECK(other.samples[0].input.values != a.samples[0].input.values);
}

TEST_CASE("dataset spec validation", "[dataset]")
{
    DatasetSpec spec;
    spec.total_samples = 100;
    spec.variable_trp_plan = {{4, 50}, {8, 40}};
    CHECK_THROWS_AS(spec.validate(8), std::invalid_argument);
    spec.variable_trp_plan = {{4, 50}, {9, 50}};
    CHECK_THROWS_AS(spec.validate(8), std::invalid_argument);
    spec.variable_trp_plan.clear();
    spec.label_noise_plan = {{0.5, 99}};
    CHECK_THROWS_AS(spec.validate(8), std::invalid_argument);
    spec.label_noise_plan.clear();
    spec.split.test = 1.0;
    CHECK_THROWS_AS(spec.validate(8), std::invalid_argument);
}
