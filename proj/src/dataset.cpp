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

#include "locnet/config_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace locnet
{
    std::string_view encoding_name(Encoding e)
    {
        switch (e)
        {
        case Encoding::Cir:
            return "cir";
        case Encoding::CirRsrp:
            return "cir-rsrp";
        case Encoding::CirRsrpRatio:
            return "cir-rsrp-ratio";
        }
        throw std::invalid_argument("unknown encoding");
    }

    Encoding parse_encoding(std::string_view name)
    {
        if (name == "cir")
            return Encoding::Cir;
        if (name == "cir-rsrp")
            return Encoding::CirRsrp;
        if (name == "cir-rsrp-ratio")
            return Encoding::CirRsrpRatio;
        throw std::invalid_argument("unknown encoding '" + std::string(name) + "' (expected cir, cir-rsrp, cir-rsrp-ratio)");
    }

    Encoding encoding_from_id(std::uint8_t id)
    {
        if (id > 2)
            throw std::invalid_argument("unknown encoding id " + std::to_string(id));
        return static_cast<Encoding>(id);
    }

    Shape3 encoded_shape(Encoding e, int n_trp, int taps)
    {
        const auto n = static_cast<std::uint32_t>(n_trp);
        const auto l = static_cast<std::uint32_t>(taps);
        switch (e)
        {
        case Encoding::Cir:
            return {n, l, 2};
        case Encoding::CirRsrp:
            return {2 * n, l, 2};
        case Encoding::CirRsrpRatio:
            return {2 * n, l, 3};
        }
        throw std::invalid_argument("unknown encoding");
    }

    namespace
    {
        void check_links(std::span<const ChannelRealization> links, const ScenarioConfig &config)
        {
            if (links.size() != static_cast<std::size_t>(config.n_trp))
                throw std::invalid_argument("encode: got " + std::to_string(links.size()) + " links for " +
                                            std::to_string(config.n_trp) + " TRPs");
            for (const auto &l : links)
                if (l.cir.size() != static_cast<std::size_t>(config.cir_taps))
                    throw std::invalid_argument("encode: CIR length differs from cir_taps");
        }

        // Rows of CIRs interleaved with constant RSRP rows, or plain CIR rows when `interleave` is false.
        InputTensor encode_rows(std::span<const ChannelRealization> links, const ScenarioConfig &config,
                                bool interleave, std::uint32_t channels, const RsrpScaling &scaling)
        {
            check_links(links, config);
            const auto n = static_cast<std::uint32_t>(links.size());
            const auto taps = static_cast<std::uint32_t>(config.cir_taps);
            InputTensor t;
            t.dims = {interleave ? 2 * n : n, taps, channels};
            t.values.assign(t.size(), 0.0f);
            for (std::size_t i = 0; i < links.size(); ++i)
            {
                const std::size_t cir_row = interleave ? 2 * i : i;
                for (std::size_t k = 0; k < taps; ++k)
                {
                    t.at(cir_row, k, 0) = static_cast<float>(links[i].cir[k].real()) * cir_input_gain;
                    t.at(cir_row, k, 1) = static_cast<float>(links[i].cir[k].imag()) * cir_input_gain;
                }
                if (!interleave)
                    continue;
                // An unmasked all-zero CIR has RSRP -inf; it carries no more than a dropped TRP.
                const double dbm = std::isfinite(links[i].rsrp_dbm) ? links[i].rsrp_dbm : rsrp_sentinel_dbm;
                const float v = scaling.apply(dbm);
                for (std::size_t k = 0; k < taps; ++k)
                {
                    t.at(2 * i + 1, k, 0) = v;
                    t.at(2 * i + 1, k, 1) = v;
                }
            }
            return t;
        }

        void check_available(int n_trp_available, int n_trp)
        {
            if (n_trp_available < 1 || n_trp_available > n_trp)
                throw std::invalid_argument("n_trp_available must lie in [1, " + std::to_string(n_trp) + "], got " +
                                            std::to_string(n_trp_available));
        }
    } // namespace

    InputTensor encode_cir(std::span<const ChannelRealization> links, const ScenarioConfig &config)
    {
        return encode_rows(links, config, false, 2, {});
    }

    InputTensor encode_cir_rsrp(std::span<const ChannelRealization> links, const ScenarioConfig &config,
                                const RsrpScaling &scaling)
    {
        return encode_rows(links, config, true, 2, scaling);
    }

    InputTensor encode_cir_rsrp_ratio(std::span<const ChannelRealization> links, int n_trp_available,
                                      const ScenarioConfig &config, const RsrpScaling &scaling)
    {
        check_available(n_trp_available, config.n_trp);
        InputTensor t = encode_rows(links, config, true, 3, scaling);
        const float ratio = static_cast<float>(n_trp_available) / static_cast<float>(config.n_trp);
        for (std::size_t r = 0; r < t.dims[0]; ++r)
            for (std::size_t k = 0; k < t.dims[1]; ++k)
                t.at(r, k, 2) = ratio;
        return t;
    }

    InputTensor encode(Encoding e, std::span<const ChannelRealization> links, int n_trp_available,
                       const ScenarioConfig &config, const RsrpScaling &scaling)
    {
        switch (e)
        {
        case Encoding::Cir:
            return encode_cir(links, config);
        case Encoding::CirRsrp:
            return encode_cir_rsrp(links, config, scaling);
        case Encoding::CirRsrpRatio:
            return encode_cir_rsrp_ratio(links, n_trp_available, config, scaling);
        }
        throw std::invalid_argument("unknown encoding");
    }

    std::vector<CVec> decode_cir(const InputTensor &t, Encoding e)
    {
        const std::size_t stride = e == Encoding::Cir ? 1 : 2;
        const std::size_t n = t.dims[0] / stride;
        std::vector<CVec> out(n, CVec(t.dims[1]));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < t.dims[1]; ++k)
                out[i][k] = cdouble(t.at(i * stride, k, 0) / cir_input_gain, t.at(i * stride, k, 1) / cir_input_gain);
        return out;
    }

    std::vector<int> top_rsrp_indices(std::span<const ChannelRealization> links, int n_trp_available)
    {
        check_available(n_trp_available, static_cast<int>(links.size()));
        std::vector<int> order(links.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return links[static_cast<std::size_t>(a)].rsrp_dbm >
                                                    links[static_cast<std::size_t>(b)].rsrp_dbm; });
        order.resize(static_cast<std::size_t>(n_trp_available));
        std::sort(order.begin(), order.end());
        return order;
    }

    std::vector<ChannelRealization> mask_trps(std::span<const ChannelRealization> links, int n_trp_available)
    {
        std::vector<ChannelRealization> out(links.begin(), links.end());
        if (n_trp_available == static_cast<int>(links.size()))
            return out;
        const auto kept = top_rsrp_indices(links, n_trp_available);
        std::vector<bool> keep(links.size(), false);
        for (int i : kept)
            keep[static_cast<std::size_t>(i)] = true;
        for (std::size_t i = 0; i < out.size(); ++i)
        {
            if (keep[i])
                continue;
            std::fill(out[i].cir.begin(), out[i].cir.end(), cdouble(0.0, 0.0));
            std::fill(out[i].freq_response.begin(), out[i].freq_response.end(), cdouble(0.0, 0.0));
            out[i].rsrp_dbm = rsrp_sentinel_dbm;
        }
        return out;
    }

    double truncated_gaussian_offset(double sigma_m, Rng &rng)
    {
        if (!(sigma_m >= 0.0))
            throw std::invalid_argument("label noise sigma must be nonnegative");
        if (sigma_m == 0.0)
            return 0.0;
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (;;)
        {
            const double z = gauss(rng);
            if (std::abs(z) <= 2.0)
                return sigma_m * z;
        }
    }

    std::pair<double, double> add_label_noise(std::pair<double, double> label_xy, double sigma_m, Rng &rng)
    {
        const double dx = truncated_gaussian_offset(sigma_m, rng);
        const double dy = truncated_gaussian_offset(sigma_m, rng);
        return {label_xy.first + dx, label_xy.second + dy};
    }

    void DatasetSpec::validate(int n_trp) const
    {
        if (total_samples == 0)
            throw std::invalid_argument("DatasetSpec: total_samples must be positive");
        if (!variable_trp_plan.empty())
        {
            std::size_t sum = 0;
            for (const auto &e : variable_trp_plan)
            {
                check_available(e.n_available, n_trp);
                sum += e.count;
            }
            if (sum != total_samples)
                throw std::invalid_argument("DatasetSpec: variable-TRP plan covers " + std::to_string(sum) +
                                            " samples, expected " + std::to_string(total_samples));
        }
        if (!label_noise_plan.empty())
        {
            std::size_t sum = 0;
            for (const auto &e : label_noise_plan)
            {
                if (!(e.sigma_m >= 0.0))
                    throw std::invalid_argument("DatasetSpec: label-noise sigma must be nonnegative");
                sum += e.count;
            }
            if (sum != total_samples)
                throw std::invalid_argument("DatasetSpec: label-noise plan covers " + std::to_string(sum) +
                                            " samples, expected " + std::to_string(total_samples));
        }
        if (!(split.test > 0.0 && split.test < 1.0 && split.validation > 0.0 && split.validation < 1.0))
            throw std::invalid_argument("DatasetSpec: split fractions must lie in (0, 1)");
        if (!(rsrp.scale_db > 0.0))
            throw std::invalid_argument("DatasetSpec: RSRP scale must be positive");
    }

    std::vector<TrpPlanEntry> default_variable_trp_plan(int n_trp, std::size_t total)
    {
        constexpr int min_available = 4;
        const int n_partial = n_trp - min_available;
        if (n_partial <= 0)
            return {{n_trp, total}};
        const std::size_t partial_total = total * 7 / 16;
        const std::size_t per_value = partial_total / static_cast<std::size_t>(n_partial);
        std::vector<TrpPlanEntry> plan;
        for (int n = min_available; n < n_trp; ++n)
            plan.push_back({n, per_value});
        plan.push_back({n_trp, total - per_value * static_cast<std::size_t>(n_partial)});
        return plan;
    }

    std::vector<NoisePlanEntry> standard_label_noise_plan(std::size_t total)
    {
        static constexpr std::array<double, 5> sigmas{0.1, 0.3, 0.5, 0.7, 1.0};
        std::vector<NoisePlanEntry> plan;
        const std::size_t per = total / sigmas.size();
        std::size_t remainder = total - per * sigmas.size();
        for (double s : sigmas)
        {
            plan.push_back({s, per + (remainder > 0 ? 1 : 0)});
            if (remainder > 0)
                --remainder;
        }
        return plan;
    }

    Dataset Dataset::subset(std::span<const std::size_t> indices) const
    {
        Dataset out;
        out.scenario = scenario;
        out.encoding = encoding;
        out.dims = dims;
        out.seed = seed;
        out.rsrp = rsrp;
        out.scenario_digest = scenario_digest;
        out.samples.reserve(indices.size());
        for (auto i : indices)
            out.samples.push_back(samples.at(i));
        return out;
    }

    namespace
    {
        template <typename Entry, typename Value>
        std::vector<Value> expand_plan(const std::vector<Entry> &plan, std::size_t total, Value fallback,
                                       Value Entry::*field, Rng rng)
        {
            std::vector<Value> out;
            if (plan.empty())
                return std::vector<Value>(total, fallback);
            out.reserve(total);
            for (const auto &e : plan)
                out.insert(out.end(), e.count, e.*field);
            std::shuffle(out.begin(), out.end(), rng);
            return out;
        }

        // Per-slot streams use the slot index; plan shuffles use an index no slot can reach.
        constexpr std::uint64_t plan_stream_index = ~std::uint64_t{0};

        struct GenerationPlan
        {
            std::vector<Position> trps;
            std::vector<Position> ues;
            LinkStates links;
            std::vector<int> n_available;
            std::vector<double> sigma;
            std::vector<std::size_t> order; // order[position] = slot
        };

        GenerationPlan make_plan(const DatasetSpec &spec, const ScenarioConfig &scenario)
        {
            scenario.validate();
            spec.validate(scenario.n_trp);
            GenerationPlan p;
            const std::uint64_t seed = spec.rng_seed;
            p.trps = build_trp_grid(scenario);
            auto rng_ue = make_rng(seed, stream::scenario);
            p.ues = drop_ues(scenario, spec.total_samples, rng_ue);
            auto rng_los = make_rng(seed, stream::los);
            p.links = classify_links(p.ues, p.trps, scenario, rng_los);
            p.n_available = expand_plan(spec.variable_trp_plan, spec.total_samples, scenario.n_trp,
                                        &TrpPlanEntry::n_available, make_rng(seed, stream::masking, plan_stream_index));
            p.sigma = expand_plan(spec.label_noise_plan, spec.total_samples, 0.0, &NoisePlanEntry::sigma_m,
                                  make_rng(seed, stream::label_noise, plan_stream_index));
            p.order.resize(spec.total_samples);
            std::iota(p.order.begin(), p.order.end(), std::size_t{0});
            auto rng_shuffle = make_rng(seed, stream::shuffle);
            std::shuffle(p.order.begin(), p.order.end(), rng_shuffle);
            return p;
        }

        Sample make_sample(const DatasetSpec &spec, const ScenarioConfig &scenario, const GenerationPlan &plan,
                           std::size_t slot)
        {
            const std::uint64_t fading_seed = derive_seed(spec.rng_seed, stream::fading, slot);
            Rng fading(fading_seed);
            std::vector<ChannelRealization> links;
            links.reserve(plan.trps.size());
            for (std::size_t j = 0; j < plan.trps.size(); ++j)
                links.push_back(synthesize_link(plan.ues[slot], plan.trps[j], plan.links.at(slot, j), scenario, fading,
                                                false));

            const int n_avail = plan.n_available[slot];
            if (n_avail < scenario.n_trp)
                links = mask_trps(links, n_avail);

            Sample s;
            s.input = encode(spec.encoding, links, n_avail, scenario, spec.rsrp);
            const double sigma = plan.sigma[slot];
            auto rng_noise = make_rng(spec.rng_seed, stream::label_noise, slot);
            const auto [nx, ny] = add_label_noise({plan.ues[slot].x_m, plan.ues[slot].y_m}, sigma, rng_noise);
            s.label_x = static_cast<float>(nx);
            s.label_y = static_cast<float>(ny);
            s.meta.n_trp_available = static_cast<std::uint8_t>(n_avail);
            s.meta.noise_sigma_m = static_cast<float>(sigma);
            s.meta.ue_index = static_cast<std::uint32_t>(slot);
            s.meta.seed_trace = fading_seed;
            s.meta.clean_x = static_cast<float>(plan.ues[slot].x_m);
            s.meta.clean_y = static_cast<float>(plan.ues[slot].y_m);
            return s;
        }
    } // namespace

    void generate_samples(const DatasetSpec &spec, const ScenarioConfig &scenario, unsigned threads,
                          const std::function<void(Sample &&)> &sink)
    {
        const GenerationPlan plan = make_plan(spec, scenario);
        const std::size_t total = spec.total_samples;
        threads = std::max(1u, threads);
        const std::size_t chunk = 256 * threads;

        std::vector<Sample> buffer;
        for (std::size_t begin = 0; begin < total; begin += chunk)
        {
            const std::size_t end = std::min(total, begin + chunk);
            buffer.assign(end - begin, Sample{});
            std::atomic<std::size_t> next{begin};
            std::exception_ptr error;
            std::mutex error_mutex;
            auto worker = [&]
            {
                try
                {
                    for (std::size_t pos = next++; pos < end; pos = next++)
                        buffer[pos - begin] = make_sample(spec, scenario, plan, plan.order[pos]);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            };
            if (threads == 1)
                worker();
            else
            {
                std::vector<std::jthread> pool;
                for (unsigned t = 0; t < threads; ++t)
                    pool.emplace_back(worker);
            }
            if (error)
                std::rethrow_exception(error);
            for (auto &s : buffer)
                sink(std::move(s));
        }
    }

    Dataset build_dataset(const DatasetSpec &spec, const ScenarioConfig &scenario, unsigned threads)
    {
        Dataset ds;
        ds.scenario = scenario;
        ds.encoding = spec.encoding;
        ds.dims = encoded_shape(spec.encoding, scenario.n_trp, scenario.cir_taps);
        ds.seed = spec.rng_seed;
        ds.rsrp = spec.rsrp;
        ds.scenario_digest = scenario_digest(scenario);
        ds.samples.reserve(spec.total_samples);
        generate_samples(spec, scenario, threads, [&](Sample &&s) { ds.samples.push_back(std::move(s)); });
        return ds;
    }

    SplitSizes split_sizes(std::size_t n, const SplitFractions &f)
    {
        const double exact[3] = {static_cast<double>(n) * (1.0 - f.test) * (1.0 - f.validation),
                                 static_cast<double>(n) * (1.0 - f.test) * f.validation,
                                 static_cast<double>(n) * f.test};
        std::size_t sizes[3];
        double frac[3];
        std::size_t assigned = 0;
        for (int i = 0; i < 3; ++i)
        {
            // Absorb representation error so that e.g. 80000 * 0.64 floors to 51200.
            const double fl = std::floor(exact[i] + 1e-9);
            sizes[i] = static_cast<std::size_t>(fl);
            frac[i] = std::max(0.0, exact[i] - fl);
            assigned += sizes[i];
        }
        std::size_t remainder = n - assigned;
        int order[3] = {0, 1, 2};
        std::stable_sort(order, order + 3, [&](int a, int b) { return frac[a] > frac[b]; });
        for (int i = 0; remainder > 0; i = (i + 1) % 3, --remainder)
            ++sizes[order[i]];
        return {sizes[0], sizes[1], sizes[2]};
    }

    SplitIndices split(std::size_t n, const SplitFractions &f, Rng &rng)
    {
        const SplitSizes sz = split_sizes(n, f);
        if (sz.train == 0 || sz.validation == 0 || sz.test == 0)
            throw std::invalid_argument("split: " + std::to_string(n) + " samples leave an empty partition");
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        SplitIndices out;
        out.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(sz.train));
        out.validation.assign(perm.begin() + static_cast<std::ptrdiff_t>(sz.train),
                              perm.begin() + static_cast<std::ptrdiff_t>(sz.train + sz.validation));
        out.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(sz.train + sz.validation), perm.end());
        return out;
    }

} // namespace locnet
