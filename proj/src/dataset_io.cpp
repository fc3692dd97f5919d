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

#include "locnet/dataset_io.hpp"

#include "locnet/config_io.hpp"
#include "locnet/errors.hpp"

#include <bit>
#include <cstring>
#include <span>
#include <system_error>

namespace locnet
{
    static_assert(std::endian::native == std::endian::little, "dataset I/O assumes a little-endian host");

    namespace
    {
        constexpr char magic[4] = {'L', 'N', 'E', 'T'};
        constexpr std::size_t meta_bytes = 1 + 4 + 4 + 8 + 4 + 4;

        template <typename V>
        void put(std::string &buf, V v)
        {
            char b[sizeof(V)];
            std::memcpy(b, &v, sizeof(V));
            buf.append(b, sizeof(V));
        }

        class Cursor
        {
        public:
            Cursor(std::span<const char> data, const std::string &what) : data_(data), what_(what) {}

            template <typename V>
            V get()
            {
                V v;
                std::memcpy(&v, take(sizeof(V)), sizeof(V));
                return v;
            }

            const char *take(std::size_t n)
            {
                if (pos_ + n > data_.size())
                    throw FormatError(what_ + ": truncated file");
                const char *p = data_.data() + pos_;
                pos_ += n;
                return p;
            }

        private:
            std::span<const char> data_;
            std::string what_;
            std::size_t pos_ = 0;
        };

        std::string header_bytes(const DatasetHeader &h)
        {
            std::string buf(magic, 4);
            put<std::uint16_t>(buf, dataset_format_version);
            put<std::uint8_t>(buf, static_cast<std::uint8_t>(h.encoding));
            put<std::uint32_t>(buf, h.n_samples);
            for (auto d : h.dims)
                put<std::uint32_t>(buf, d);
            buf.append(reinterpret_cast<const char *>(h.scenario_digest.data()), h.scenario_digest.size());
            put<std::uint64_t>(buf, h.seed);

            const json ext{
                {"scenario", to_json(h.scenario)},
                {"rsrp_offset_db", h.rsrp.offset_db},
                {"rsrp_scale_db", h.rsrp.scale_db},
                {"rsrp_sentinel_dbm", rsrp_sentinel_dbm},
                {"cir_input_gain", cir_input_gain},
                {"ifft_normalization", "1/N (flat unit response -> unit impulse at tap 0)"},
            };
            const std::string text = ext.dump();
            put<std::uint32_t>(buf, static_cast<std::uint32_t>(text.size()));
            buf += text;
            return buf;
        }

        std::string sample_bytes(const Sample &s, const Shape3 &dims)
        {
            if (s.input.dims != dims || s.input.values.size() != s.input.size())
                throw std::invalid_argument("dataset writer: sample shape differs from the header");
            std::string buf;
            buf.reserve(s.input.values.size() * 4 + 8 + meta_bytes);
            buf.append(reinterpret_cast<const char *>(s.input.values.data()), s.input.values.size() * sizeof(float));
            put<float>(buf, s.label_x);
            put<float>(buf, s.label_y);
            put<std::uint8_t>(buf, s.meta.n_trp_available);
            put<float>(buf, s.meta.noise_sigma_m);
            put<std::uint32_t>(buf, s.meta.ue_index);
            put<std::uint64_t>(buf, s.meta.seed_trace);
            put<float>(buf, s.meta.clean_x);
            put<float>(buf, s.meta.clean_y);
            return buf;
        }

        DatasetHeader parse_header(Cursor &c, const std::string &what)
        {
            if (std::memcmp(c.take(4), magic, 4) != 0)
                throw FormatError(what + ": bad magic (not a dataset file)");
            const auto version = c.get<std::uint16_t>();
            if (version != dataset_format_version)
                throw FormatError(what + ": unsupported dataset format version " + std::to_string(version));
            DatasetHeader h;
            try
            {
                h.encoding = encoding_from_id(c.get<std::uint8_t>());
            }
            catch (const std::invalid_argument &e)
            {
                throw FormatError(what + ": " + e.what());
            }
            h.n_samples = c.get<std::uint32_t>();
            for (auto &d : h.dims)
                d = c.get<std::uint32_t>();
            std::memcpy(h.scenario_digest.data(), c.take(32), 32);
            h.seed = c.get<std::uint64_t>();
            const auto n = c.get<std::uint32_t>();
            const char *p = c.take(n);
            try
            {
                const json ext = json::parse(std::string_view(p, n));
                merge_scenario(h.scenario, ext.at("scenario"));
                h.rsrp.offset_db = ext.at("rsrp_offset_db").get<double>();
                h.rsrp.scale_db = ext.at("rsrp_scale_db").get<double>();
                if (ext.at("cir_input_gain").get<float>() != cir_input_gain)
                    throw std::invalid_argument("unsupported CIR input gain");
            }
            catch (const std::exception &e)
            {
                throw FormatError(what + ": malformed header extension: " + e.what());
            }
            const Shape3 expected = encoded_shape(h.encoding, h.scenario.n_trp, h.scenario.cir_taps);
            if (expected != h.dims)
                throw FormatError(what + ": header shape does not match encoding " +
                                  std::string(encoding_name(h.encoding)) + " for the recorded scenario");
            return h;
        }

        std::vector<char> slurp(const std::filesystem::path &path)
        {
            std::ifstream in(path, std::ios::binary);
            if (!in)
                throw FormatError("cannot open dataset " + path.string());
            in.seekg(0, std::ios::end);
            const auto size = static_cast<std::size_t>(in.tellg());
            in.seekg(0);
            std::vector<char> data(size);
            in.read(data.data(), static_cast<std::streamsize>(size));
            return data;
        }
    } // namespace

    DatasetHeader header_of(const Dataset &d)
    {
        DatasetHeader h;
        h.encoding = d.encoding;
        h.n_samples = static_cast<std::uint32_t>(d.samples.size());
        h.dims = d.dims;
        h.scenario_digest = d.scenario_digest;
        h.seed = d.seed;
        h.scenario = d.scenario;
        h.rsrp = d.rsrp;
        return h;
    }

    DatasetWriter::DatasetWriter(const std::filesystem::path &path, const DatasetHeader &header)
        : path_(path), tmp_(path), header_(header)
    {
        tmp_ += ".tmp";
        out_.open(tmp_, std::ios::binary | std::ios::trunc);
        if (!out_)
            throw std::runtime_error("cannot write " + tmp_.string());
        const std::string h = header_bytes(header_);
        out_.write(h.data(), static_cast<std::streamsize>(h.size()));
    }

    DatasetWriter::~DatasetWriter()
    {
        if (!finished_)
        {
            out_.close();
            std::error_code ec;
            std::filesystem::remove(tmp_, ec);
        }
    }

    void DatasetWriter::write(const Sample &s)
    {
        if (written_ >= header_.n_samples)
            throw std::logic_error("dataset writer: more samples than announced in the header");
        const std::string b = sample_bytes(s, header_.dims);
        out_.write(b.data(), static_cast<std::streamsize>(b.size()));
        ++written_;
    }

    void DatasetWriter::finish()
    {
        if (written_ != header_.n_samples)
            throw std::logic_error("dataset writer: wrote " + std::to_string(written_) + " of " +
                                   std::to_string(header_.n_samples) + " samples");
        out_.close();
        if (!out_)
            throw std::runtime_error("write failed for " + tmp_.string());
        std::filesystem::rename(tmp_, path_);
        finished_ = true;
    }

    void serialize(const Dataset &d, const std::filesystem::path &path)
    {
        DatasetWriter w(path, header_of(d));
        for (const auto &s : d.samples)
            w.write(s);
        w.finish();
    }

    DatasetHeader read_header(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw FormatError("cannot open dataset " + path.string());
        std::vector<char> head(4 + 2 + 1 + 4 + 12 + 32 + 8 + 4);
        in.read(head.data(), static_cast<std::streamsize>(head.size()));
        if (in.gcount() != static_cast<std::streamsize>(head.size()))
            throw FormatError(path.string() + ": truncated file");
        std::uint32_t n;
        std::memcpy(&n, head.data() + head.size() - 4, 4);
        head.resize(head.size() + n);
        in.read(head.data() + head.size() - n, n);
        if (in.gcount() != static_cast<std::streamsize>(n))
            throw FormatError(path.string() + ": truncated file");
        Cursor c(head, path.string());
        return parse_header(c, path.string());
    }

    Dataset deserialize(const std::filesystem::path &path)
    {
        const std::vector<char> data = slurp(path);
        const std::string what = path.string();
        Cursor c(data, what);
        const DatasetHeader h = parse_header(c, what);

        Dataset d;
        d.scenario = h.scenario;
        d.encoding = h.encoding;
        d.dims = h.dims;
        d.seed = h.seed;
        d.rsrp = h.rsrp;
        d.scenario_digest = h.scenario_digest;
        const std::size_t n_values = static_cast<std::size_t>(h.dims[0]) * h.dims[1] * h.dims[2];
        d.samples.resize(h.n_samples);
        for (auto &s : d.samples)
        {
            s.input.dims = h.dims;
            s.input.values.resize(n_values);
            std::memcpy(s.input.values.data(), c.take(n_values * sizeof(float)), n_values * sizeof(float));
            s.label_x = c.get<float>();
            s.label_y = c.get<float>();
            s.meta.n_trp_available = c.get<std::uint8_t>();
            s.meta.noise_sigma_m = c.get<float>();
            s.meta.ue_index = c.get<std::uint32_t>();
            s.meta.seed_trace = c.get<std::uint64_t>();
            s.meta.clean_x = c.get<float>();
            s.meta.clean_y = c.get<float>();
        }
        if (c.take(0) != data.data() + data.size())
            throw FormatError(what + ": trailing bytes after the last sample");
        return d;
    }

} // namespace locnet
