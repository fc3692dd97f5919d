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

#include "locnet/digest.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <memory>
#include <stdexcept>
#include <vector>

namespace locnet
{
    namespace
    {
        struct MdCtxDeleter
        {
            void operator()(EVP_MD_CTX *ctx) const { EVP_MD_CTX_free(ctx); }
        };

        class Sha256
        {
        public:
            Sha256() : ctx_(EVP_MD_CTX_new())
            {
                if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1)
                    throw std::runtime_error("sha256: EVP init failed");
            }

            void update(const void *data, std::size_t n)
            {
                if (EVP_DigestUpdate(ctx_.get(), data, n) != 1)
                    throw std::runtime_error("sha256: EVP update failed");
            }

            Digest finish()
            {
                Digest d{};
                unsigned int len = 0;
                if (EVP_DigestFinal_ex(ctx_.get(), d.data(), &len) != 1 || len != d.size())
                    throw std::runtime_error("sha256: EVP final failed");
                return d;
            }

        private:
            std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx_;
        };
    } // namespace

    Digest sha256(std::span<const std::uint8_t> bytes)
    {
        Sha256 h;
        h.update(bytes.data(), bytes.size());
        return h.finish();
    }

    Digest sha256(std::string_view text)
    {
        Sha256 h;
        h.update(text.data(), text.size());
        return h.finish();
    }

    Digest sha256_file(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("sha256_file: cannot open " + path.string());
        Sha256 h;
        std::vector<char> buf(1 << 16);
        while (in)
        {
            in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
            h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
        }
        return h.finish();
    }

    std::string to_hex(const Digest &d)
    {
        static constexpr char digits[] = "0123456789abcdef";
        std::string s;
        s.reserve(64);
        for (auto b : d)
        {
            s.push_back(digits[b >> 4]);
            s.push_back(digits[b & 0xF]);
        }
        return s;
    }

} // namespace locnet
