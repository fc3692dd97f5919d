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

#include "locnet/checkpoint.hpp"

#include "locnet/config_io.hpp"
#include "locnet/errors.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace locnet
{
    namespace
    {
        constexpr char magic[4] = {'L', 'N', 'W', 'T'};

        template <typename V>
        void put(std::string &buf, V v)
        {
            char b[sizeof(V)];
            std::memcpy(b, &v, sizeof(V));
            buf.append(b, sizeof(V));
        }

        struct Reader
        {
            const std::vector<char> &data;
            std::string what;
            std::size_t pos = 0;

            const char *take(std::size_t n)
            {
                if (pos + n > data.size())
                    throw FormatError(what + ": truncated checkpoint");
                const char *p = data.data() + pos;
                pos += n;
                return p;
            }

            template <typename V>
            V get()
            {
                V v;
                std::memcpy(&v, take(sizeof(V)), sizeof(V));
                return v;
            }
        };
    } // namespace

    void save_checkpoint(LocNet<float> &model, Encoding encoding, const std::filesystem::path &path,
                         const std::string &scenario_digest)
    {
        static_assert(std::endian::native == std::endian::little);
        std::string buf(magic, 4);
        put<std::uint16_t>(buf, checkpoint_format_version);
        json meta{{"model", to_json(model.config())}, {"encoding", std::string(encoding_name(encoding))}};
        if (!scenario_digest.empty())
            meta["scenario_digest"] = scenario_digest;
        const std::string cfg = meta.dump();
        put<std::uint32_t>(buf, static_cast<std::uint32_t>(cfg.size()));
        buf += cfg;

        const nn::ParamList<float> tensors = model.state();
        put<std::uint32_t>(buf, static_cast<std::uint32_t>(tensors.size()));
        for (const auto &t : tensors)
        {
            put<std::uint16_t>(buf, static_cast<std::uint16_t>(t.name.size()));
            buf += t.name;
            put<std::uint8_t>(buf, static_cast<std::uint8_t>(t.tensor->shape.size()));
            for (auto d : t.tensor->shape)
                put<std::uint32_t>(buf, static_cast<std::uint32_t>(d));
        }
        for (const auto &t : tensors)
            buf.append(reinterpret_cast<const char *>(t.tensor->data()), t.tensor->size() * sizeof(float));
        write_file_atomic(path, buf);
    }

    LoadedModel load_checkpoint(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw FormatError("cannot open checkpoint " + path.string());
        const std::vector<char> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        Reader r{data, path.string()};
        if (std::memcmp(r.take(4), magic, 4) != 0)
            throw FormatError(r.what + ": bad magic (not a checkpoint)");
        const auto version = r.get<std::uint16_t>();
        if (version != checkpoint_format_version)
            throw FormatError(r.what + ": unsupported checkpoint version " + std::to_string(version));

        LoadedModel out;
        const auto n = r.get<std::uint32_t>();
        const char *p = r.take(n);
        try
        {
            const json j = json::parse(std::string_view(p, n));
            merge_model(out.config, j.at("model"));
            out.encoding = parse_encoding(j.at("encoding").get<std::string>());
            out.scenario_digest = j.value("scenario_digest", std::string());
            out.config.validate();
        }
        catch (const std::exception &e)
        {
            throw FormatError(r.what + ": malformed checkpoint config: " + e.what());
        }
        out.model = std::make_unique<LocNet<float>>(out.config, 0);

        const nn::ParamList<float> tensors = out.model->state();
        const auto count = r.get<std::uint32_t>();
        if (count != tensors.size())
            throw FormatError(r.what + ": checkpoint holds " + std::to_string(count) + " tensors, model expects " +
                              std::to_string(tensors.size()));
        for (const auto &t : tensors)
        {
            const auto len = r.get<std::uint16_t>();
            const std::string name(r.take(len), len);
            const auto rank = r.get<std::uint8_t>();
            nn::Shape shape(rank);
            for (auto &d : shape)
                d = r.get<std::uint32_t>();
            if (name != t.name || shape != t.tensor->shape)
                throw FormatError(r.what + ": manifest entry " + name + " " + nn::shape_string(shape) +
                                  " does not match model tensor " + t.name + " " + nn::shape_string(t.tensor->shape));
        }
        for (const auto &t : tensors)
            std::memcpy(t.tensor->data(), r.take(t.tensor->size() * sizeof(float)), t.tensor->size() * sizeof(float));
        if (r.pos != data.size())
            throw FormatError(r.what + ": trailing bytes after the last tensor");
        return out;
    }

} // namespace locnet
