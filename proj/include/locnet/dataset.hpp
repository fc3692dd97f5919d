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

#ifndef LOCNET_DATASET_HPP
#define LOCNET_DATASET_HPP

#include "locnet/channel.hpp"
#include "locnet/digest.hpp"
#include "locnet/scenario.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace locnet
{
    // Model input encodings. The numeric value is the on-disk encoding id.
    enum class Encoding : std::uint8_t
    {
        Cir = 0,          // n_trp x L x 2
        CirRsrp = 1,      // 2 n_trp x L x 2, rows [CIR_0, RSRP_0, CIR_1, RSRP_1, ...]
        CirRsrpRatio = 2, // 2 n_trp x L x 3, third channel = N'/N
    };

    std::string_view encoding_name(Encoding e);
    Encoding parse_encoding(std::string_view name);
    Encoding encoding_from_id(std::uint8_t id);

    using Shape3 = std::array<std::uint32_t, 3>; // rows, taps, channels

    Shape3 encoded_shape(Encoding e, int n_trp, int taps);

    inline constexpr double rsrp_sentinel_dbm = -500.0;

    // CIR taps are stored multiplied by 2^16. Raw amplitudes after the link budget sit around
    // 1e-5, whose variance would vanish under the batch-norm epsilon. A power of two keeps the
    // scaling exact in single precision.
    inline constexpr float cir_input_gain = 65536.0f;

    // Affine map from dBm to model input: (dbm + offset) / scale.
    struct RsrpScaling
    {
        double offset_db = 100.0;
        double scale_db = 50.0;

        float apply(double dbm) const { return static_cast<float>((dbm + offset_db) / scale_db); }
    };

    // Row-major rows x taps x channels, single precision.
    struct InputTensor
    {
        Shape3 dims{0, 0, 0};
        std::vector<float> values;

        std::size_t size() const { return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2]; }
        float &at(std::size_t r, std::size_t t, std::size_t c) { return values[(r * dims[1] + t) * dims[2] + c]; }
        float at(std::size_t r, std::size_t t, std::size_t c) const { return values[(r * dims[1] + t) * dims[2] + c]; }
    };

    struct SampleMeta
    {
        std::uint8_t n_trp_available = 0;
        float noise_sigma_m = 0.0f;
        std::uint32_t ue_index = 0;
        std::uint64_t seed_trace = 0; // seed of the sample's fading stream
        float clean_x = 0.0f;         // label before noise injection
        float clean_y = 0.0f;
    };

    struct Sample
    {
        InputTensor input;
        float label_x = 0.0f;
        float label_y = 0.0f;
        SampleMeta meta;
    };

    InputTensor encode_cir(std::span<const ChannelRealization> links, const ScenarioConfig &config);
    InputTensor encode_cir_rsrp(std::span<const ChannelRealization> links, const ScenarioConfig &config,
                                const RsrpScaling &scaling = {});
    InputTensor encode_cir_rsrp_ratio(std::span<const ChannelRealization> links, int n_trp_available,
                                      const ScenarioConfig &config, const RsrpScaling &scaling = {});
    InputTensor encode(Encoding e, std::span<const ChannelRealization> links, int n_trp_available,
                       const ScenarioConfig &config, const RsrpScaling &scaling = {});

    // Per-TRP CIRs recovered from the CIR rows of any encoding (single precision values, input gain removed).
    std::vector<CVec> decode_cir(const InputTensor &t, Encoding e);

    // Keeps the n_trp_available strongest links (ties to the lower TRP index); the others get
    // an all-zero CIR and the -500 dBm sentinel.
    std::vector<ChannelRealization> mask_trps(std::span<const ChannelRealization> links, int n_trp_available);

    // Indices of the kept TRPs, ascending.
    std::vector<int> top_rsrp_indices(std::span<const ChannelRealization> links, int n_trp_available);

    // Offset drawn from N(0, sigma^2) truncated to [-2 sigma, 2 sigma] by rejection.
    double truncated_gaussian_offset(double sigma_m, Rng &rng);
    std::pair<double, double> add_label_noise(std::pair<double, double> label_xy, double sigma_m, Rng &rng);

    struct TrpPlanEntry
    {
        int n_available;
        std::size_t count;
    };

    struct NoisePlanEntry
    {
        double sigma_m;
        std::size_t count;
    };

    struct SplitFractions
    {
        double test = 0.2;       // of the total
        double validation = 0.2; // of the non-test remainder
    };

    struct DatasetSpec
    {
        Encoding encoding = Encoding::CirRsrp;
        std::size_t total_samples = 5000;
        std::vector<TrpPlanEntry> variable_trp_plan; // empty: every sample sees all TRPs
        std::vector<NoisePlanEntry> label_noise_plan; // empty: clean labels
        SplitFractions split;
        std::uint64_t rng_seed = 1;
        RsrpScaling rsrp;

        void validate(int n_trp) const;
    };

    // 7/16 of the samples spread evenly over N' = 4..n_trp-1, the rest at N' = n_trp
    // (2500 per N' plus 45000 at 18 for 80000 samples and 18 TRPs).
    std::vector<TrpPlanEntry> default_variable_trp_plan(int n_trp, std::size_t total);

    // Equal shares over sigma in {0.1, 0.3, 0.5, 0.7, 1.0} m (16000 each for 80000 samples).
    std::vector<NoisePlanEntry> standard_label_noise_plan(std::size_t total);

    struct Dataset
    {
        ScenarioConfig scenario;
        Encoding encoding = Encoding::CirRsrp;
        Shape3 dims{0, 0, 0};
        std::uint64_t seed = 0;
        RsrpScaling rsrp;
        Digest scenario_digest{};
        std::vector<Sample> samples;

        std::size_t size() const { return samples.size(); }
        Dataset subset(std::span<const std::size_t> indices) const;
    };

    // Generates every sample in shuffled order and hands them to `sink` one at a time
    // (position 0 first). Output is independent of `threads`.
    void generate_samples(const DatasetSpec &spec, const ScenarioConfig &scenario, unsigned threads,
                          const std::function<void(Sample &&)> &sink);

    Dataset build_dataset(const DatasetSpec &spec, const ScenarioConfig &scenario, unsigned threads = 1);

    struct SplitSizes
    {
        std::size_t train, validation, test;
    };

    // Largest-remainder rounding of (0.8*0.8, 0.8*0.2, 0.2)-style fractions of n.
    SplitSizes split_sizes(std::size_t n, const SplitFractions &f);

    struct SplitIndices
    {
        std::vector<std::size_t> train, validation, test;
    };

    // Seeded permutation cut into train / validation / test. Throws if a part would be empty.
    SplitIndices split(std::size_t n, const SplitFractions &f, Rng &rng);

} // namespace locnet

#endif
