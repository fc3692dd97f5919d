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

#include "locnet/config_io.hpp"

#include "locnet/errors.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <stdexcept>

namespace locnet
{
    namespace
    {
        void reject_unknown(const json &j, const std::set<std::string> &known, std::string_view section)
        {
            if (!j.is_object())
                throw std::invalid_argument("config section '" + std::string(section) + "' must be an object");
            for (auto it = j.begin(); it != j.end(); ++it)
                if (!known.contains(it.key()))
                    throw std::invalid_argument("unknown key '" + it.key() + "' in config section '" +
                                                std::string(section) + "'");
        }

        template <typename V>
        void take(const json &j, const char *key, V &field)
        {
            if (auto it = j.find(key); it != j.end())
            {
                try
                {
                    field = it->get<V>();
                }
                catch (const json::exception &e)
                {
                    throw std::invalid_argument(std::string("config key '") + key + "': " + e.what());
                }
            }
        }

        template <typename V>
        void take(const json &j, const char *key, std::optional<V> &field)
        {
            if (auto it = j.find(key); it != j.end())
            {
                if (it->is_null())
                    field.reset();
                else
                {
                    V v{};
                    take(j, key, v);
                    field = v;
                }
            }
        }

        json optional_json(const std::optional<double> &v)
        {
            return v ? json(*v) : json(nullptr);
        }

        double parse_double(std::string_view s)
        {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || ptr != s.data() + s.size())
                throw std::invalid_argument("not a number: '" + std::string(s) + "'");
            return v;
        }

        std::size_t parse_count(std::string_view s)
        {
            std::size_t v = 0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || ptr != s.data() + s.size())
                throw std::invalid_argument("not a count: '" + std::string(s) + "'");
            return v;
        }

        // "a:b,c:d" -> pairs of string views.
        std::vector<std::pair<std::string_view, std::string_view>> split_pairs(std::string_view text)
        {
            std::vector<std::pair<std::string_view, std::string_view>> out;
            while (!text.empty())
            {
                const auto comma = text.find(',');
                const std::string_view item = text.substr(0, comma);
                const auto colon = item.find(':');
                if (colon == std::string_view::npos)
                    throw std::invalid_argument("plan entry '" + std::string(item) + "' is not of the form value:count");
                out.emplace_back(item.substr(0, colon), item.substr(colon + 1));
                if (comma == std::string_view::npos)
                    break;
                text.remove_prefix(comma + 1);
            }
            return out;
        }
    } // namespace

    // ---------------------------------------------------------------- scenario

    json to_json(const ScenarioConfig &c)
    {
        const MultipathConfig &m = c.multipath;
        return json{
            {"hall_length_m", c.hall_length_m},
            {"hall_width_m", c.hall_width_m},
            {"n_trp", c.n_trp},
            {"trp_height_m", c.trp_height_m},
            {"grid_rows", c.grid_rows},
            {"grid_cols", c.grid_cols},
            {"trp_spacing_m", c.trp_spacing_m},
            {"ue_height_m", c.ue_height_m},
            {"clutter_density", c.clutter_density},
            {"clutter_height_m", c.clutter_height_m},
            {"clutter_size_m", c.clutter_size_m},
            {"shadow_sigma_db", c.shadow_sigma_db},
            {"carrier_ghz", c.carrier_ghz},
            {"bandwidth_hz", c.bandwidth_hz},
            {"n_subcarriers", c.n_subcarriers},
            {"subcarrier_spacing_hz", c.subcarrier_spacing_hz},
            {"cir_taps", c.cir_taps},
            {"tx_power_dbm", c.tx_power_dbm},
            {"rng_seed", c.rng_seed},
            {"los_decay_override_m", optional_json(c.los_decay_override_m)},
            {"multipath",
             {{"tau_rms_s", m.tau_rms_s},
              {"delay_span_factor", m.delay_span_factor},
              {"n_paths_min", m.n_paths_min},
              {"n_paths_max", m.n_paths_max},
              {"rician_k_db", m.rician_k_db},
              {"snr_db", optional_json(m.snr_db)}}},
        };
    }

    void merge_scenario(ScenarioConfig &c, const json &j)
    {
        reject_unknown(j,
                       {"hall_length_m", "hall_width_m", "n_trp", "trp_height_m", "grid_rows", "grid_cols",
                        "trp_spacing_m", "ue_height_m", "clutter_density", "clutter_height_m", "clutter_size_m",
                        "shadow_sigma_db", "carrier_ghz", "bandwidth_hz", "n_subcarriers", "subcarrier_spacing_hz",
                        "cir_taps", "tx_power_dbm", "rng_seed", "los_decay_override_m", "multipath"},
                       "scenario");
        take(j, "hall_length_m", c.hall_length_m);
        take(j, "hall_width_m", c.hall_width_m);
        take(j, "n_trp", c.n_trp);
        take(j, "trp_height_m", c.trp_height_m);
        take(j, "grid_rows", c.grid_rows);
        take(j, "grid_cols", c.grid_cols);
        take(j, "trp_spacing_m", c.trp_spacing_m);
        take(j, "ue_height_m", c.ue_height_m);
        take(j, "clutter_density", c.clutter_density);
        take(j, "clutter_height_m", c.clutter_height_m);
        take(j, "clutter_size_m", c.clutter_size_m);
        take(j, "shadow_sigma_db", c.shadow_sigma_db);
        take(j, "carrier_ghz", c.carrier_ghz);
        take(j, "bandwidth_hz", c.bandwidth_hz);
        take(j, "n_subcarriers", c.n_subcarriers);
        take(j, "subcarrier_spacing_hz", c.subcarrier_spacing_hz);
        take(j, "cir_taps", c.cir_taps);
        take(j, "tx_power_dbm", c.tx_power_dbm);
        take(j, "rng_seed", c.rng_seed);
        take(j, "los_decay_override_m", c.los_decay_override_m);
        if (auto it = j.find("multipath"); it != j.end())
        {
            const json &m = *it;
            reject_unknown(m, {"tau_rms_s", "delay_span_factor", "n_paths_min", "n_paths_max", "rician_k_db", "snr_db"},
                           "scenario.multipath");
            take(m, "tau_rms_s", c.multipath.tau_rms_s);
            take(m, "delay_span_factor", c.multipath.delay_span_factor);
            take(m, "n_paths_min", c.multipath.n_paths_min);
            take(m, "n_paths_max", c.multipath.n_paths_max);
            take(m, "rician_k_db", c.multipath.rician_k_db);
            take(m, "snr_db", c.multipath.snr_db);
        }
    }

    Digest scenario_digest(const ScenarioConfig &c)
    {
        json j = to_json(c);
        j.erase("rng_seed");
        return sha256(std::string_view(j.dump()));
    }

    // ---------------------------------------------------------------- model / train

    json to_json(const LocNetConfig &c)
    {
        return json{
            {"n_residual_blocks", c.n_residual_blocks},
            {"convs_per_block", c.convs_per_block},
            {"base_channels", c.base_channels},
            {"kernel_size", c.kernel_size},
            {"dilation_schedule", c.dilation_schedule},
            {"attention_kernel_size", c.attention_kernel_size},
            {"head_channels", c.head_channels},
            {"dropout_rate", c.dropout_rate},
            {"input_shape", c.input_shape},
            {"output_dim", c.output_dim},
            {"output_bias", c.output_bias},
            {"use_attention", c.use_attention},
            {"use_dilation", c.use_dilation},
        };
    }

    void merge_model(LocNetConfig &c, const json &j)
    {
        reject_unknown(j,
                       {"n_residual_blocks", "convs_per_block", "base_channels", "kernel_size", "dilation_schedule",
                        "attention_kernel_size", "head_channels", "dropout_rate", "input_shape", "output_dim",
                        "output_bias", "use_attention", "use_dilation"},
                       "model");
        take(j, "n_residual_blocks", c.n_residual_blocks);
        take(j, "convs_per_block", c.convs_per_block);
        take(j, "base_channels", c.base_channels);
        take(j, "kernel_size", c.kernel_size);
        take(j, "dilation_schedule", c.dilation_schedule);
        take(j, "attention_kernel_size", c.attention_kernel_size);
        take(j, "head_channels", c.head_channels);
        take(j, "dropout_rate", c.dropout_rate);
        take(j, "input_shape", c.input_shape);
        take(j, "output_dim", c.output_dim);
        take(j, "output_bias", c.output_bias);
        take(j, "use_attention", c.use_attention);
        take(j, "use_dilation", c.use_dilation);
    }

    json to_json(const TrainConfig &c)
    {
        return json{
            {"epochs", c.epochs},           {"batch_size", c.batch_size}, {"lr", c.lr},
            {"beta1", c.beta1},             {"beta2", c.beta2},           {"eps", c.eps},
            {"seed", c.seed},               {"patience", c.patience},     {"lr_schedule", c.lr_schedule},
            {"log_every", c.log_every},     {"stop_at_val_loss", c.stop_at_val_loss},
        };
    }

    void merge_train(TrainConfig &c, const json &j)
    {
        reject_unknown(
            j, {"epochs", "batch_size", "lr", "beta1", "beta2", "eps", "seed", "patience", "lr_schedule", "log_every",
                "stop_at_val_loss"},
            "train");
        take(j, "epochs", c.epochs);
        take(j, "batch_size", c.batch_size);
        take(j, "lr", c.lr);
        take(j, "beta1", c.beta1);
        take(j, "beta2", c.beta2);
        take(j, "eps", c.eps);
        take(j, "seed", c.seed);
        take(j, "patience", c.patience);
        take(j, "lr_schedule", c.lr_schedule);
        take(j, "log_every", c.log_every);
        take(j, "stop_at_val_loss", c.stop_at_val_loss);
    }

    // ---------------------------------------------------------------- dataset

    std::vector<TrpPlanEntry> parse_trp_plan(std::string_view text, int n_trp, std::size_t total)
    {
        if (text.empty() || text == "none")
            return {};
        if (text == "default")
            return default_variable_trp_plan(n_trp, total);
        std::vector<TrpPlanEntry> plan;
        for (auto [n, count] : split_pairs(text))
            plan.push_back({static_cast<int>(parse_count(n)), parse_count(count)});
        return plan;
    }

    std::vector<NoisePlanEntry> parse_noise_plan(std::string_view text, std::size_t total)
    {
        if (text.empty() || text == "none")
            return {};
        if (text == "standard")
            return standard_label_noise_plan(total);
        std::vector<NoisePlanEntry> plan;
        for (auto [sigma, count] : split_pairs(text))
            plan.push_back({parse_double(sigma), parse_count(count)});
        return plan;
    }

    DatasetSpec DatasetRecipe::resolve(int n_trp) const
    {
        DatasetSpec s;
        s.encoding = encoding;
        s.total_samples = samples;
        s.variable_trp_plan = parse_trp_plan(variable_trp_plan, n_trp, samples);
        s.label_noise_plan = parse_noise_plan(label_noise_plan, samples);
        s.split = split;
        s.rng_seed = seed;
        s.rsrp = rsrp;
        s.validate(n_trp);
        return s;
    }

    json to_json(const DatasetRecipe &r)
    {
        return json{
            {"encoding", std::string(encoding_name(r.encoding))},
            {"samples", r.samples},
            {"variable_trp_plan", r.variable_trp_plan},
            {"label_noise_plan", r.label_noise_plan},
            {"seed", r.seed},
            {"split", {{"test", r.split.test}, {"validation", r.split.validation}}},
            {"rsrp", {{"offset_db", r.rsrp.offset_db}, {"scale_db", r.rsrp.scale_db}}},
        };
    }

    void merge_dataset(DatasetRecipe &r, const json &j)
    {
        reject_unknown(j, {"encoding", "samples", "variable_trp_plan", "label_noise_plan", "seed", "split", "rsrp"},
                       "dataset");
        if (auto it = j.find("encoding"); it != j.end())
            r.encoding = parse_encoding(it->get<std::string>());
        take(j, "samples", r.samples);
        take(j, "variable_trp_plan", r.variable_trp_plan);
        take(j, "label_noise_plan", r.label_noise_plan);
        take(j, "seed", r.seed);
        if (auto it = j.find("split"); it != j.end())
        {
            reject_unknown(*it, {"test", "validation"}, "dataset.split");
            take(*it, "test", r.split.test);
            take(*it, "validation", r.split.validation);
        }
        if (auto it = j.find("rsrp"); it != j.end())
        {
            reject_unknown(*it, {"offset_db", "scale_db"}, "dataset.rsrp");
            take(*it, "offset_db", r.rsrp.offset_db);
            take(*it, "scale_db", r.rsrp.scale_db);
        }
    }

    // ---------------------------------------------------------------- files

    json load_json_file(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw FormatError("cannot open config file " + path.string());
        try
        {
            return json::parse(in);
        }
        catch (const json::parse_error &e)
        {
            throw FormatError("malformed JSON in " + path.string() + ": " + e.what());
        }
    }

    void write_file_atomic(const std::filesystem::path &path, std::string_view contents)
    {
        std::filesystem::path tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                throw std::runtime_error("cannot write " + tmp.string());
            out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
            if (!out)
                throw std::runtime_error("write failed for " + tmp.string());
        }
        std::filesystem::rename(tmp, path);
    }

} // namespace locnet
