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

#include "locnet/nn/layers.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

namespace locnet::nn
{
    std::string shape_string(const Shape &s)
    {
        std::ostringstream os;
        os << '{';
        for (std::size_t i = 0; i < s.size(); ++i)
            os << (i ? ", " : "") << s[i];
        os << '}';
        return os.str();
    }

    namespace
    {
        template <typename T>
        using MatR = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        template <typename T>
        using VecC = Eigen::Matrix<T, Eigen::Dynamic, 1>;

        // Reductions with a summation order fixed by the index alone. Eigen's vectorized reductions peel
        // according to the buffer's address alignment, so the same data at another address can round
        // differently; these keep results independent of where the allocator put a tensor.
        template <typename T>
        double sum_fixed(const T *p, std::size_t n)
        {
            double lane[8] = {};
            std::size_t i = 0;
            for (; i + 8 <= n; i += 8)
                for (std::size_t k = 0; k < 8; ++k)
                    lane[k] += static_cast<double>(p[i + k]);
            for (std::size_t k = 0; i < n; ++i, ++k)
                lane[k] += static_cast<double>(p[i]);
            return ((lane[0] + lane[1]) + (lane[2] + lane[3])) + ((lane[4] + lane[5]) + (lane[6] + lane[7]));
        }

        template <typename T>
        double dot_fixed(const T *a, const T *b, std::size_t n)
        {
            double lane[8] = {};
            std::size_t i = 0;
            for (; i + 8 <= n; i += 8)
                for (std::size_t k = 0; k < 8; ++k)
                    lane[k] += static_cast<double>(a[i + k]) * static_cast<double>(b[i + k]);
            for (std::size_t k = 0; i < n; ++i, ++k)
                lane[k] += static_cast<double>(a[i]) * static_cast<double>(b[i]);
            return ((lane[0] + lane[1]) + (lane[2] + lane[3])) + ((lane[4] + lane[5]) + (lane[6] + lane[7]));
        }

        template <typename T>
        double centered_square_sum(const T *p, std::size_t n, double mean)
        {
            double lane[8] = {};
            std::size_t i = 0;
            for (; i + 8 <= n; i += 8)
                for (std::size_t k = 0; k < 8; ++k)
                {
                    const double d = static_cast<double>(p[i + k]) - mean;
                    lane[k] += d * d;
                }
            for (std::size_t k = 0; i < n; ++i, ++k)
            {
                const double d = static_cast<double>(p[i]) - mean;
                lane[k] += d * d;
            }
            return ((lane[0] + lane[1]) + (lane[2] + lane[3])) + ((lane[4] + lane[5]) + (lane[6] + lane[7]));
        }

        void require_rank(const Shape &s, std::size_t rank, const char *where)
        {
            if (s.size() != rank)
                throw std::invalid_argument(std::string(where) + ": expected rank " + std::to_string(rank) +
                                            " input, got " + shape_string(s));
        }

        // Source column range [lo, hi) of an output row shifted by `offset` that stays inside [0, width).
        inline void valid_range(std::ptrdiff_t width, std::ptrdiff_t offset, std::ptrdiff_t &lo, std::ptrdiff_t &hi)
        {
            lo = std::clamp<std::ptrdiff_t>(-offset, 0, width);
            hi = std::clamp<std::ptrdiff_t>(width - offset, lo, width);
        }

        template <typename T>
        void im2col(const T *x, std::size_t C, std::size_t B, std::size_t H, std::size_t W, std::size_t k,
                    std::size_t dil, std::size_t pad, T *col)
        {
            const std::size_t N = B * H * W;
            const auto sH = static_cast<std::ptrdiff_t>(H), sW = static_cast<std::ptrdiff_t>(W);
            for (std::size_t c = 0; c < C; ++c)
                for (std::size_t ky = 0; ky < k; ++ky)
                    for (std::size_t kx = 0; kx < k; ++kx)
                    {
                        T *dst = col + ((c * k + ky) * k + kx) * N;
                        const auto oy = static_cast<std::ptrdiff_t>(ky * dil) - static_cast<std::ptrdiff_t>(pad);
                        const auto ox = static_cast<std::ptrdiff_t>(kx * dil) - static_cast<std::ptrdiff_t>(pad);
                        std::ptrdiff_t lo, hi;
                        valid_range(sW, ox, lo, hi);
                        for (std::size_t b = 0; b < B; ++b)
                            for (std::ptrdiff_t h = 0; h < sH; ++h)
                            {
                                T *row = dst + (b * H + static_cast<std::size_t>(h)) * W;
                                const std::ptrdiff_t sh = h + oy;
                                if (sh < 0 || sh >= sH)
                                {
                                    std::fill(row, row + W, T(0));
                                    continue;
                                }
                                const T *src = x + ((c * B + b) * H + static_cast<std::size_t>(sh)) * W;
                                std::fill(row, row + lo, T(0));
                                std::copy(src + lo + ox, src + hi + ox, row + lo);
                                std::fill(row + hi, row + sW, T(0));
                            }
                    }
        }

        template <typename T>
        void col2im(const T *col, std::size_t C, std::size_t B, std::size_t H, std::size_t W, std::size_t k,
                    std::size_t dil, std::size_t pad, T *dx)
        {
            const std::size_t N = B * H * W;
            const auto sH = static_cast<std::ptrdiff_t>(H), sW = static_cast<std::ptrdiff_t>(W);
            for (std::size_t c = 0; c < C; ++c)
                for (std::size_t ky = 0; ky < k; ++ky)
                    for (std::size_t kx = 0; kx < k; ++kx)
                    {
                        const T *src = col + ((c * k + ky) * k + kx) * N;
                        const auto oy = static_cast<std::ptrdiff_t>(ky * dil) - static_cast<std::ptrdiff_t>(pad);
                        const auto ox = static_cast<std::ptrdiff_t>(kx * dil) - static_cast<std::ptrdiff_t>(pad);
                        std::ptrdiff_t lo, hi;
                        valid_range(sW, ox, lo, hi);
                        for (std::size_t b = 0; b < B; ++b)
                            for (std::ptrdiff_t h = 0; h < sH; ++h)
                            {
                                const std::ptrdiff_t sh = h + oy;
                                if (sh < 0 || sh >= sH)
                                    continue;
                                const T *row = src + (b * H + static_cast<std::size_t>(h)) * W;
                                T *dst = dx + ((c * B + b) * H + static_cast<std::size_t>(sh)) * W;
                                for (std::ptrdiff_t w = lo; w < hi; ++w)
                                    dst[w + ox] += row[w];
                            }
                    }
        }

        // Per-thread work buffers shared by every convolution.
        template <typename T, int Slot>
        std::vector<T> &col_scratch(std::size_t n)
        {
            thread_local std::vector<T> buf;
            if (buf.size() < n)
                buf.resize(n);
            return buf;
        }

        template <typename T>
        void add_into(std::vector<T> &acc, const T *delta)
        {
            for (std::size_t i = 0; i < acc.size(); ++i)
                acc[i] += delta[i];
        }
    } // namespace

    // ---------------------------------------------------------------- Conv2d

    template <typename T>
    Conv2d<T>::Conv2d(std::size_t c_in, std::size_t c_out, std::size_t kernel, std::size_t dilation)
        : weight({c_out, c_in, kernel, kernel}, T(0), true), bias({c_out}, T(0), true), c_in_(c_in), c_out_(c_out),
          k_(kernel), dilation_(dilation)
    {
        if (c_in == 0 || c_out == 0 || kernel == 0)
            throw std::invalid_argument("Conv2d: channels and kernel size must be positive");
        if (dilation == 0)
            throw std::invalid_argument("Conv2d: dilation must be >= 1");
    }

    template <typename T>
    void Conv2d<T>::init(Rng &rng)
    {
        std::normal_distribution<double> g(0.0, std::sqrt(2.0 / static_cast<double>(c_in_ * k_ * k_)));
        for (auto &w : weight.values)
            w = static_cast<T>(g(rng));
        std::fill(bias.values.begin(), bias.values.end(), T(0));
    }

    namespace
    {
        // Zero-padded layout for the shifted-GEMM path. A tap (ky, kx) reads the padded plane at a
        // constant offset from the output's anchor, so each tap is one strided matrix product.
        constexpr std::size_t conv_tile = 4096;

        struct PadGeometry
        {
            std::size_t Hp, Wp, Np, Nv;

            PadGeometry(std::size_t B, std::size_t H, std::size_t W, std::size_t pad_total)
                : Hp(H + pad_total), Wp(W + pad_total), Np(B * Hp * Wp), Nv((B - 1) * Hp * Wp + (H - 1) * Wp + W)
            {
            }

            std::size_t offset(std::size_t ky, std::size_t kx, std::size_t dil) const { return ky * dil * Wp + kx * dil; }
            std::size_t anchor(std::size_t b, std::size_t h, std::size_t w) const { return (b * Hp + h) * Wp + w; }
        };

        // weight {C_out, C_in, k, k} -> per-tap {C_out, C_in} matrices.
        template <typename T>
        void pack_taps(const T *w, std::size_t c_out, std::size_t c_in, std::size_t k, T *taps)
        {
            for (std::size_t o = 0; o < c_out; ++o)
                for (std::size_t c = 0; c < c_in; ++c)
                    for (std::size_t t = 0; t < k * k; ++t)
                        taps[(t * c_out + o) * c_in + c] = w[(o * c_in + c) * k * k + t];
        }
    } // namespace

    template <typename T>
    Tensor<T> Conv2d<T>::forward(const Tensor<T> &x, Mode)
    {
        require_rank(x.shape, 4, "Conv2d");
        if (x.shape[0] != c_in_)
            throw std::invalid_argument("Conv2d: input has " + std::to_string(x.shape[0]) + " channels, expected " +
                                        std::to_string(c_in_));
        in_shape_ = x.shape;
        const std::size_t B = x.shape[1], H = x.shape[2], W = x.shape[3];
        const std::size_t N = B * H * W;
        const auto eM = static_cast<Eigen::Index>(c_out_);
        Tensor<T> out({c_out_, B, H, W});

        if (use_im2col())
        {
            const std::size_t K = c_in_ * k_ * k_;
            saved_ = x.values;
            std::vector<T> &col = col_scratch<T, 0>(K * N);
            im2col(x.data(), c_in_, B, H, W, k_, dilation_, pad_low(), col.data());
            Eigen::Map<const MatR<T>> wm(weight.data(), eM, static_cast<Eigen::Index>(K));
            Eigen::Map<const MatR<T>> cm(col.data(), static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(N));
            Eigen::Map<MatR<T>> ym(out.data(), eM, static_cast<Eigen::Index>(N));
            ym.noalias() = wm * cm;
            for (std::size_t o = 0; o < c_out_; ++o)
            {
                T *row = out.data() + o * N;
                const T b = bias.values[o];
                for (std::size_t i = 0; i < N; ++i)
                    row[i] += b;
            }
            return out;
        }

        const PadGeometry g(B, H, W, dilation_ * (k_ - 1));
        const std::size_t pl = pad_low();
        saved_.assign(c_in_ * g.Np, T(0));
        for (std::size_t c = 0; c < c_in_; ++c)
            for (std::size_t b = 0; b < B; ++b)
                for (std::size_t h = 0; h < H; ++h)
                    std::memcpy(saved_.data() + c * g.Np + g.anchor(b, h + pl, pl), x.data() + ((c * B + b) * H + h) * W,
                                W * sizeof(T));

        std::vector<T> taps(k_ * k_ * c_out_ * c_in_);
        pack_taps(weight.data(), c_out_, c_in_, k_, taps.data());
        std::vector<T> &ya = col_scratch<T, 0>(c_out_ * g.Nv);
        const Eigen::OuterStride<> x_stride(static_cast<Eigen::Index>(g.Np));
        const Eigen::OuterStride<> y_stride(static_cast<Eigen::Index>(g.Nv));
        const std::size_t tile = conv_tile;
        // Column tiles keep the output block cache-resident across the k*k tap products.
        for (std::size_t q0 = 0; q0 < g.Nv; q0 += tile)
        {
            const auto n = static_cast<Eigen::Index>(std::min(tile, g.Nv - q0));
            Eigen::Map<MatR<T>, 0, Eigen::OuterStride<>> yb(ya.data() + q0, eM, n, y_stride);
            yb.setZero();
            for (std::size_t t = 0; t < k_ * k_; ++t)
            {
                Eigen::Map<const MatR<T>> wk(taps.data() + t * c_out_ * c_in_, eM, static_cast<Eigen::Index>(c_in_));
                Eigen::Map<const MatR<T>, 0, Eigen::OuterStride<>> xs(
                    saved_.data() + g.offset(t / k_, t % k_, dilation_) + q0, static_cast<Eigen::Index>(c_in_), n,
                    x_stride);
                yb.noalias() += wk * xs;
            }
        }
        for (std::size_t o = 0; o < c_out_; ++o)
        {
            const T bo = bias.values[o];
            for (std::size_t b = 0; b < B; ++b)
                for (std::size_t h = 0; h < H; ++h)
                {
                    const T *src = ya.data() + o * g.Nv + g.anchor(b, h, 0);
                    T *dst = out.data() + ((o * B + b) * H + h) * W;
                    for (std::size_t w = 0; w < W; ++w)
                        dst[w] = src[w] + bo;
                }
        }
        return out;
    }

    template <typename T>
    Tensor<T> Conv2d<T>::backward(const Tensor<T> &grad_out)
    {
        if (in_shape_.size() != 4)
            throw std::logic_error("Conv2d::backward called before forward");
        const std::size_t B = in_shape_[1], H = in_shape_[2], W = in_shape_[3];
        const std::size_t N = B * H * W;
        if (grad_out.shape != Shape{c_out_, B, H, W})
            throw std::invalid_argument("Conv2d::backward: gradient shape " + shape_string(grad_out.shape) +
                                        " does not match the last output");
        const auto eM = static_cast<Eigen::Index>(c_out_);
        const auto eC = static_cast<Eigen::Index>(c_in_);

        std::vector<T> db(c_out_);
        for (std::size_t o = 0; o < c_out_; ++o)
            db[o] = static_cast<T>(sum_fixed(grad_out.data() + o * N, N));
        add_into(bias.grad, db.data());
        Tensor<T> dx(in_shape_);

        if (use_im2col())
        {
            const std::size_t K = c_in_ * k_ * k_;
            std::vector<T> &col = col_scratch<T, 0>(K * N);
            im2col(saved_.data(), c_in_, B, H, W, k_, dilation_, pad_low(), col.data());
            Eigen::Map<MatR<T>> cm(col.data(), static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(N));
            Eigen::Map<const MatR<T>> wm(weight.data(), eM, static_cast<Eigen::Index>(K));
            Eigen::Map<const MatR<T>> gm(grad_out.data(), eM, static_cast<Eigen::Index>(N));
            MatR<T> dw = gm * cm.transpose();
            add_into(weight.grad, dw.data());
            // The column buffer is no longer needed; reuse it for dL/dcol.
            cm.noalias() = wm.transpose() * gm;
            col2im(col.data(), c_in_, B, H, W, k_, dilation_, pad_low(), dx.data());
            return dx;
        }

        const PadGeometry g(B, H, W, dilation_ * (k_ - 1));
        const std::size_t pl = pad_low();
        std::vector<T> &dya = col_scratch<T, 0>(c_out_ * g.Nv);
        std::fill(dya.begin(), dya.begin() + static_cast<std::ptrdiff_t>(c_out_ * g.Nv), T(0));
        for (std::size_t o = 0; o < c_out_; ++o)
            for (std::size_t b = 0; b < B; ++b)
                for (std::size_t h = 0; h < H; ++h)
                    std::memcpy(dya.data() + o * g.Nv + g.anchor(b, h, 0), grad_out.data() + ((o * B + b) * H + h) * W,
                                W * sizeof(T));
        const Eigen::OuterStride<> x_stride(static_cast<Eigen::Index>(g.Np));
        const Eigen::OuterStride<> y_stride(static_cast<Eigen::Index>(g.Nv));
        const std::size_t n_taps = k_ * k_;
        const std::size_t tile = conv_tile;
        std::vector<std::size_t> offsets(n_taps);
        for (std::size_t t = 0; t < n_taps; ++t)
            offsets[t] = g.offset(t / k_, t % k_, dilation_);

        std::vector<T> taps(n_taps * c_out_ * c_in_);
        pack_taps(weight.data(), c_out_, c_in_, k_, taps.data());

        // dL/dW per tap, accumulated over column tiles.
        std::vector<MatR<T>> dw(n_taps, MatR<T>::Zero(eM, eC));
        for (std::size_t q0 = 0; q0 < g.Nv; q0 += tile)
        {
            const auto n = static_cast<Eigen::Index>(std::min(tile, g.Nv - q0));
            Eigen::Map<const MatR<T>, 0, Eigen::OuterStride<>> dyb(dya.data() + q0, eM, n, y_stride);
            for (std::size_t t = 0; t < n_taps; ++t)
            {
                Eigen::Map<const MatR<T>, 0, Eigen::OuterStride<>> xs(saved_.data() + offsets[t] + q0, eC, n, x_stride);
                dw[t].noalias() += dyb * xs.transpose();
            }
        }
        for (std::size_t t = 0; t < n_taps; ++t)
            for (std::size_t o = 0; o < c_out_; ++o)
                for (std::size_t c = 0; c < c_in_; ++c)
                    weight.grad[(o * c_in_ + c) * n_taps + t] +=
                        dw[t](static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(c));

        // dL/dx on the padded grid, tiled over its columns: dxp[:, q] = sum_t W_t^T dy[:, q - off_t].
        std::vector<T> &dxp = col_scratch<T, 1>(c_in_ * g.Np);
        for (std::size_t q0 = 0; q0 < g.Np; q0 += tile)
        {
            const std::size_t q1 = std::min(g.Np, q0 + tile);
            Eigen::Map<MatR<T>, 0, Eigen::OuterStride<>> dxb(dxp.data() + q0, eC, static_cast<Eigen::Index>(q1 - q0),
                                                               x_stride);
            dxb.setZero();
            for (std::size_t t = 0; t < n_taps; ++t)
            {
                const std::size_t off = offsets[t];
                const std::size_t a0 = q0 > off ? q0 - off : 0;
                const std::size_t a1 = std::min(g.Nv, q1 > off ? q1 - off : 0);
                if (a1 <= a0)
                    continue;
                const auto n = static_cast<Eigen::Index>(a1 - a0);
                Eigen::Map<const MatR<T>> wk(taps.data() + t * c_out_ * c_in_, eM, eC);
                Eigen::Map<const MatR<T>, 0, Eigen::OuterStride<>> dyb(dya.data() + a0, eM, n, y_stride);
                Eigen::Map<MatR<T>, 0, Eigen::OuterStride<>> dxs(dxp.data() + a0 + off, eC, n, x_stride);
                dxs.noalias() += wk.transpose() * dyb;
            }
        }
        for (std::size_t c = 0; c < c_in_; ++c)
            for (std::size_t b = 0; b < B; ++b)
                for (std::size_t h = 0; h < H; ++h)
                    std::memcpy(dx.data() + ((c * B + b) * H + h) * W, dxp.data() + c * g.Np + g.anchor(b, h + pl, pl),
                                W * sizeof(T));
        return dx;
    }

    template <typename T>
    void Conv2d<T>::parameters(ParamList<T> &out, const std::string &prefix)
    {
        out.push_back({prefix + ".weight", &weight});
        out.push_back({prefix + ".bias", &bias});
    }

    // ---------------------------------------------------------------- BatchNorm2d

    template <typename T>
    BatchNorm2d<T>::BatchNorm2d(std::size_t channels, double momentum, double eps)
        : gamma({channels}, T(1), true), beta({channels}, T(0), true), running_mean({channels}, T(0)),
          running_var({channels}, T(1)), channels_(channels), momentum_(momentum), eps_(eps)
    {
        if (channels == 0)
            throw std::invalid_argument("BatchNorm2d: channels must be positive");
    }

    template <typename T>
    Tensor<T> BatchNorm2d<T>::forward(const Tensor<T> &x, Mode mode)
    {
        require_rank(x.shape, 4, "BatchNorm2d");
        if (x.shape[0] != channels_)
            throw std::invalid_argument("BatchNorm2d: channel mismatch");
        const std::size_t B = x.shape[1];
        const std::size_t M = x.size() / channels_;
        if (mode == Mode::Train && B < 2)
            throw std::invalid_argument("BatchNorm2d: training mode needs a batch of at least 2");
        in_shape_ = x.shape;
        last_mode_ = mode;
        xhat_.resize(x.size());
        inv_std_.resize(channels_);

        Tensor<T> out(x.shape);
        for (std::size_t c = 0; c < channels_; ++c)
        {
            const T *xc = x.data() + c * M;
            double mean, var;
            if (mode == Mode::Train)
            {
                mean = sum_fixed(xc, M) / static_cast<double>(M);
                const double ss = centered_square_sum(xc, M, mean);
                var = ss / static_cast<double>(M);
                const double unbiased = M > 1 ? ss / static_cast<double>(M - 1) : var;
                running_mean.values[c] =
                    static_cast<T>((1.0 - momentum_) * running_mean.values[c] + momentum_ * mean);
                running_var.values[c] = static_cast<T>((1.0 - momentum_) * running_var.values[c] + momentum_ * unbiased);
            }
            else
            {
                mean = running_mean.values[c];
                var = std::max<double>(0.0, running_var.values[c]);
            }
            const double inv = 1.0 / std::sqrt(var + eps_);
            inv_std_[c] = static_cast<T>(inv);
            T *xh = xhat_.data() + c * M;
            T *yc = out.data() + c * M;
            const T g = gamma.values[c], b = beta.values[c];
            const T m = static_cast<T>(mean), is = static_cast<T>(inv);
            for (std::size_t i = 0; i < M; ++i)
            {
                xh[i] = (xc[i] - m) * is;
                yc[i] = g * xh[i] + b;
            }
        }
        return out;
    }

    template <typename T>
    Tensor<T> BatchNorm2d<T>::backward(const Tensor<T> &grad_out)
    {
        if (grad_out.shape != in_shape_)
            throw std::invalid_argument("BatchNorm2d::backward: gradient shape mismatch");
        const std::size_t M = grad_out.size() / channels_;
        Tensor<T> dx(in_shape_);
        std::vector<T> dgamma(channels_), dbeta(channels_);
        for (std::size_t c = 0; c < channels_; ++c)
        {
            const T *g = grad_out.data() + c * M;
            const T *xh = xhat_.data() + c * M;
            const double sum_g = sum_fixed(g, M);
            const double sum_gx = dot_fixed(g, xh, M);
            dgamma[c] = static_cast<T>(sum_gx);
            dbeta[c] = static_cast<T>(sum_g);
            T *d = dx.data() + c * M;
            const T gs = gamma.values[c] * inv_std_[c];
            if (last_mode_ == Mode::Train)
            {
                const T mg = static_cast<T>(sum_g / static_cast<double>(M));
                const T mgx = static_cast<T>(sum_gx / static_cast<double>(M));
                for (std::size_t i = 0; i < M; ++i)
                    d[i] = gs * (g[i] - mg - xh[i] * mgx);
            }
            else
            {
                for (std::size_t i = 0; i < M; ++i)
                    d[i] = gs * g[i];
            }
        }
        add_into(gamma.grad, dgamma.data());
        add_into(beta.grad, dbeta.data());
        return dx;
    }

    template <typename T>
    void BatchNorm2d<T>::parameters(ParamList<T> &out, const std::string &prefix)
    {
        out.push_back({prefix + ".gamma", &gamma});
        out.push_back({prefix + ".beta", &beta});
    }

    template <typename T>
    void BatchNorm2d<T>::state(ParamList<T> &out, const std::string &prefix)
    {
        parameters(out, prefix);
        out.push_back({prefix + ".running_mean", &running_mean});
        out.push_back({prefix + ".running_var", &running_var});
    }

    // ---------------------------------------------------------------- ReLU / Sigmoid

    template <typename T>
    Tensor<T> ReLU<T>::forward(const Tensor<T> &x, Mode)
    {
        shape_ = x.shape;
        active_.resize(x.size());
        Tensor<T> out(x.shape);
        const T *in = x.data();
        T *o = out.data();
        unsigned char *a = active_.data();
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            a[i] = in[i] > T(0);
            o[i] = std::max(in[i], T(0));
        }
        return out;
    }

    template <typename T>
    Tensor<T> ReLU<T>::backward(const Tensor<T> &grad_out)
    {
        if (grad_out.shape != shape_)
            throw std::invalid_argument("ReLU::backward: gradient shape mismatch");
        Tensor<T> dx(shape_);
        const T *g = grad_out.data();
        const unsigned char *a = active_.data();
        T *d = dx.data();
        for (std::size_t i = 0; i < dx.size(); ++i)
            d[i] = a[i] ? g[i] : T(0);
        return dx;
    }

    template <typename T>
    Tensor<T> Sigmoid<T>::forward(const Tensor<T> &x, Mode)
    {
        constexpr T lo = std::numeric_limits<T>::min();
        constexpr T hi = T(1) - std::numeric_limits<T>::epsilon() / T(2);
        out_ = Tensor<T>(x.shape);
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            const T v = x.values[i];
            T s;
            if (v >= T(0))
                s = T(1) / (T(1) + std::exp(-v));
            else
            {
                const T e = std::exp(v);
                s = e / (T(1) + e);
            }
            out_.values[i] = std::clamp(s, lo, hi);
        }
        return out_;
    }

    template <typename T>
    Tensor<T> Sigmoid<T>::backward(const Tensor<T> &grad_out)
    {
        require_same_shape(grad_out, out_, "Sigmoid::backward");
        Tensor<T> dx(out_.shape);
        for (std::size_t i = 0; i < dx.size(); ++i)
        {
            const T s = out_.values[i];
            dx.values[i] = grad_out.values[i] * s * (T(1) - s);
        }
        return dx;
    }

    // ---------------------------------------------------------------- Flatten

    template <typename T>
    Tensor<T> Flatten<T>::forward(const Tensor<T> &x, Mode)
    {
        require_rank(x.shape, 4, "Flatten");
        in_shape_ = x.shape;
        const std::size_t C = x.shape[0], B = x.shape[1], HW = x.shape[2] * x.shape[3];
        Tensor<T> out({B, C * HW});
        for (std::size_t c = 0; c < C; ++c)
            for (std::size_t b = 0; b < B; ++b)
                std::memcpy(out.data() + b * C * HW + c * HW, x.data() + (c * B + b) * HW, HW * sizeof(T));
        return out;
    }

    template <typename T>
    Tensor<T> Flatten<T>::backward(const Tensor<T> &grad_out)
    {
        const std::size_t C = in_shape_.at(0), B = in_shape_[1], HW = in_shape_[2] * in_shape_[3];
        if (grad_out.shape != Shape{B, C * HW})
            throw std::invalid_argument("Flatten::backward: gradient shape mismatch");
        Tensor<T> dx(in_shape_);
        for (std::size_t c = 0; c < C; ++c)
            for (std::size_t b = 0; b < B; ++b)
                std::memcpy(dx.data() + (c * B + b) * HW, grad_out.data() + b * C * HW + c * HW, HW * sizeof(T));
        return dx;
    }

    // ---------------------------------------------------------------- Dropout

    template <typename T>
    Dropout<T>::Dropout(double rate, std::uint64_t seed) : rate_(rate), rng_(seed)
    {
        if (!(rate >= 0.0 && rate < 1.0))
            throw std::invalid_argument("Dropout: rate must lie in [0, 1)");
    }

    template <typename T>
    Tensor<T> Dropout<T>::forward(const Tensor<T> &x, Mode mode)
    {
        last_mode_ = mode;
        if (mode == Mode::Eval || rate_ == 0.0)
        {
            scale_.clear();
            return x;
        }
        if (!frozen_ || scale_.size() != x.size())
        {
            scale_.resize(x.size());
            std::bernoulli_distribution keep(1.0 - rate_);
            const T s = static_cast<T>(1.0 / (1.0 - rate_));
            for (auto &v : scale_)
                v = keep(rng_) ? s : T(0);
        }
        Tensor<T> out(x.shape);
        for (std::size_t i = 0; i < x.size(); ++i)
            out.values[i] = x.values[i] * scale_[i];
        return out;
    }

    template <typename T>
    Tensor<T> Dropout<T>::backward(const Tensor<T> &grad_out)
    {
        if (scale_.empty())
            return grad_out;
        if (grad_out.size() != scale_.size())
            throw std::invalid_argument("Dropout::backward: gradient shape mismatch");
        Tensor<T> dx(grad_out.shape);
        for (std::size_t i = 0; i < dx.size(); ++i)
            dx.values[i] = grad_out.values[i] * scale_[i];
        return dx;
    }

    // ---------------------------------------------------------------- Dense

    template <typename T>
    Dense<T>::Dense(std::size_t in_features, std::size_t out_features)
        : weight({out_features, in_features}, T(0), true), bias({out_features}, T(0), true), in_(in_features),
          out_(out_features)
    {
        if (in_features == 0 || out_features == 0)
            throw std::invalid_argument("Dense: feature counts must be positive");
    }

    template <typename T>
    void Dense<T>::init(Rng &rng)
    {
        const double limit = std::sqrt(6.0 / static_cast<double>(in_ + out_));
        std::uniform_real_distribution<double> u(-limit, limit);
        for (auto &w : weight.values)
            w = static_cast<T>(u(rng));
        std::fill(bias.values.begin(), bias.values.end(), T(0));
    }

    template <typename T>
    Tensor<T> Dense<T>::forward(const Tensor<T> &x, Mode)
    {
        require_rank(x.shape, 2, "Dense");
        if (x.shape[1] != in_)
            throw std::invalid_argument("Dense: input has " + std::to_string(x.shape[1]) + " features, expected " +
                                        std::to_string(in_));
        input_ = x;
        const std::size_t B = x.shape[0];
        Tensor<T> out({B, out_});
        Eigen::Map<const MatR<T>> xm(x.data(), static_cast<Eigen::Index>(B), static_cast<Eigen::Index>(in_));
        Eigen::Map<const MatR<T>> wm(weight.data(), static_cast<Eigen::Index>(out_), static_cast<Eigen::Index>(in_));
        Eigen::Map<MatR<T>> ym(out.data(), static_cast<Eigen::Index>(B), static_cast<Eigen::Index>(out_));
        ym.noalias() = xm * wm.transpose();
        Eigen::Map<const Eigen::Matrix<T, 1, Eigen::Dynamic>> bv(bias.data(), static_cast<Eigen::Index>(out_));
        ym.rowwise() += bv;
        return out;
    }

    template <typename T>
    Tensor<T> Dense<T>::backward(const Tensor<T> &grad_out)
    {
        const std::size_t B = input_.shape.at(0);
        if (grad_out.shape != Shape{B, out_})
            throw std::invalid_argument("Dense::backward: gradient shape mismatch");
        Eigen::Map<const MatR<T>> gm(grad_out.data(), static_cast<Eigen::Index>(B), static_cast<Eigen::Index>(out_));
        Eigen::Map<const MatR<T>> xm(input_.data(), static_cast<Eigen::Index>(B), static_cast<Eigen::Index>(in_));
        Eigen::Map<const MatR<T>> wm(weight.data(), static_cast<Eigen::Index>(out_), static_cast<Eigen::Index>(in_));
        MatR<T> dw = gm.transpose() * xm;
        add_into(weight.grad, dw.data());
        std::vector<T> db(out_, T(0));
        for (std::size_t b = 0; b < B; ++b)
            for (std::size_t o = 0; o < out_; ++o)
                db[o] += grad_out.values[b * out_ + o];
        add_into(bias.grad, db.data());
        Tensor<T> dx({B, in_});
        Eigen::Map<MatR<T>> dxm(dx.data(), static_cast<Eigen::Index>(B), static_cast<Eigen::Index>(in_));
        dxm.noalias() = gm * wm;
        return dx;
    }

    template <typename T>
    void Dense<T>::parameters(ParamList<T> &out, const std::string &prefix)
    {
        out.push_back({prefix + ".weight", &weight});
        out.push_back({prefix + ".bias", &bias});
    }

    // ---------------------------------------------------------------- Sequential

    template <typename T>
    Tensor<T> Sequential<T>::forward(const Tensor<T> &x, Mode mode)
    {
        Tensor<T> h = x;
        for (auto &l : layers_)
            h = l->forward(h, mode);
        return h;
    }

    template <typename T>
    Tensor<T> Sequential<T>::backward(const Tensor<T> &grad_out)
    {
        Tensor<T> g = grad_out;
        for (auto it = layers_.rbegin(); it != layers_.rend(); ++it)
            g = (*it)->backward(g);
        return g;
    }

    template <typename T>
    ParamList<T> Sequential<T>::parameters()
    {
        ParamList<T> out;
        for (std::size_t i = 0; i < layers_.size(); ++i)
            layers_[i]->parameters(out, std::to_string(i) + "." + std::string(layers_[i]->kind()));
        return out;
    }

    template class Conv2d<float>;
    template class Conv2d<double>;
    template class BatchNorm2d<float>;
    template class BatchNorm2d<double>;
    template class ReLU<float>;
    template class ReLU<double>;
    template class Sigmoid<float>;
    template class Sigmoid<double>;
    template class Flatten<float>;
    template class Flatten<double>;
    template class Dropout<float>;
    template class Dropout<double>;
    template class Dense<float>;
    template class Dense<double>;
    template class Sequential<float>;
    template class Sequential<double>;

} // namespace locnet::nn
