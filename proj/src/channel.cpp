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

#include "locnet/channel.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace locnet
{
    namespace
    {
        void check_distance(double d_3d_m, double f_c_ghz)
        {
            if (!(d_3d_m >= 1.0))
                throw std::invalid_argument("path loss: d_3d_m must be >= 1 m");
            if (!(f_c_ghz > 0.0))
                throw std::invalid_argument("path loss: carrier frequency must be positive");
        }

        // FFTW planning is not thread-safe; execution with new arrays is.
        class BackwardPlanCache
        {
        public:
            fftw_plan get(int n)
            {
                std::lock_guard<std::mutex> lock(mutex_);
                auto it = plans_.find(n);
                if (it != plans_.end())
                    return it->second;
                std::vector<fftw_complex> buf_in(static_cast<std::size_t>(n)), buf_out(static_cast<std::size_t>(n));
                fftw_plan plan = fftw_plan_dft_1d(n, buf_in.data(), buf_out.data(), FFTW_BACKWARD,
                                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
                if (!plan)
                    throw std::runtime_error("FFTW planning failed");
                plans_.emplace(n, plan);
                return plan;
            }

            ~BackwardPlanCache()
            {
                for (auto &[n, plan] : plans_)
                    fftw_destroy_plan(plan);
            }

        private:
            std::mutex mutex_;
            std::map<int, fftw_plan> plans_;
        };

        BackwardPlanCache &plan_cache()
        {
            static BackwardPlanCache cache;
            return cache;
        }

        constexpr int phasor_resync = 64;
    } // namespace

    double path_loss_nlos(double d_3d_m, double f_c_ghz)
    {
        check_distance(d_3d_m, f_c_ghz);
        return 33.63 + 21.9 * std::log10(d_3d_m) + 20.0 * std::log10(f_c_ghz);
    }

    double path_loss_los(double d_3d_m, double f_c_ghz)
    {
        check_distance(d_3d_m, f_c_ghz);
        return 31.84 + 21.5 * std::log10(d_3d_m) + 19.0 * std::log10(f_c_ghz);
    }

    double path_loss(double d_3d_m, double f_c_ghz)
    {
        return std::max(path_loss_nlos(d_3d_m, f_c_ghz), path_loss_los(d_3d_m, f_c_ghz));
    }

    double MultipathProfile::mean_excess_delay_s() const
    {
        double acc = 0.0, total = 0.0;
        for (std::size_t p = 0; p < delays_s.size(); ++p)
        {
            acc += powers_linear[p] * (delays_s[p] - geometric_delay_s);
            total += powers_linear[p];
        }
        return total > 0.0 ? acc / total : 0.0;
    }

    MultipathProfile draw_multipath(bool los, double d_3d_m, const ScenarioConfig &config, Rng &rng)
    {
        const auto &mp = config.multipath;
        std::uniform_int_distribution<int> n_dist(mp.n_paths_min, mp.n_paths_max);
        const int n_paths = n_dist(rng);
        const int n_diffuse = los ? n_paths - 1 : n_paths;

        std::uniform_real_distribution<double> excess_dist(0.0, mp.delay_span_factor * mp.tau_rms_s);
        std::vector<double> excess(static_cast<std::size_t>(n_diffuse));
        for (auto &e : excess)
            e = excess_dist(rng);
        std::sort(excess.begin(), excess.end());

        MultipathProfile prof;
        prof.los = los;
        prof.geometric_delay_s = d_3d_m / speed_of_light;

        std::vector<double> diffuse(excess.size());
        for (std::size_t p = 0; p < excess.size(); ++p)
            diffuse[p] = std::exp(-excess[p] / mp.tau_rms_s);
        const double diffuse_sum = std::accumulate(diffuse.begin(), diffuse.end(), 0.0);

        double los_share = 0.0;
        if (los)
        {
            const double k_lin = std::pow(10.0, mp.rician_k_db / 10.0);
            los_share = diffuse.empty() ? 1.0 : k_lin / (k_lin + 1.0);
            prof.delays_s.push_back(prof.geometric_delay_s);
            prof.powers_linear.push_back(los_share);
        }
        for (std::size_t p = 0; p < excess.size(); ++p)
        {
            prof.delays_s.push_back(prof.geometric_delay_s + excess[p]);
            prof.powers_linear.push_back((1.0 - los_share) * diffuse[p] / diffuse_sum);
        }

        // Renormalize so the sum is one to rounding.
        const double total = std::accumulate(prof.powers_linear.begin(), prof.powers_linear.end(), 0.0);
        for (auto &p : prof.powers_linear)
            p /= total;
        return prof;
    }

    CVec freq_response_from_gains(std::span<const double> delays_s, std::span<const cdouble> gains, int n_subcarriers,
                                  double subcarrier_spacing_hz)
    {
        if (delays_s.size() != gains.size())
            throw std::invalid_argument("freq_response: delays and gains differ in length");
        CVec h(static_cast<std::size_t>(n_subcarriers), cdouble(0.0, 0.0));
        for (std::size_t p = 0; p < delays_s.size(); ++p)
        {
            const double step = -2.0 * std::numbers::pi * subcarrier_spacing_hz * delays_s[p];
            const cdouble w = std::polar(1.0, step);
            cdouble z(1.0, 0.0);
            for (int k = 0; k < n_subcarriers; ++k)
            {
                if (k % phasor_resync == 0)
                    z = std::polar(1.0, step * k);
                h[static_cast<std::size_t>(k)] += gains[p] * z;
                z *= w;
            }
        }
        return h;
    }

    CVec freq_response(const MultipathProfile &profile, const ScenarioConfig &config, Rng &rng)
    {
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<cdouble> gains(profile.n_paths());
        for (std::size_t p = 0; p < profile.n_paths(); ++p)
        {
            if (profile.los && p == 0)
            {
                const double phase = -2.0 * std::numbers::pi * config.carrier_ghz * 1e9 * profile.delays_s[0];
                gains[p] = std::polar(std::sqrt(profile.powers_linear[0]), phase);
            }
            else
            {
                const double re = gauss(rng), im = gauss(rng);
                gains[p] = std::sqrt(profile.powers_linear[p] / 2.0) * cdouble(re, im);
            }
        }
        return freq_response_from_gains(profile.delays_s, gains, config.n_subcarriers, config.subcarrier_spacing_hz);
    }

    CVec inverse_dft(std::span<const cdouble> freq)
    {
        const int n = static_cast<int>(freq.size());
        if (n == 0)
            return {};
        CVec out(freq.size());
        fftw_plan plan = plan_cache().get(n);
        // FFTW does not modify the input of an out-of-place complex transform.
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex *>(const_cast<cdouble *>(freq.data())),
                         reinterpret_cast<fftw_complex *>(out.data()));
        const double scale = 1.0 / n;
        for (auto &v : out)
            v *= scale;
        return out;
    }

    CVec cir_from_freq(std::span<const cdouble> freq, const ScenarioConfig &config)
    {
        if (freq.size() != static_cast<std::size_t>(config.n_subcarriers))
            throw std::invalid_argument("cir_from_freq: frequency response length must equal n_subcarriers");
        CVec full = inverse_dft(freq);
        full.resize(static_cast<std::size_t>(config.cir_taps));
        return full;
    }

    CVec apply_link_budget(std::span<const cdouble> cir, double path_loss_db, double shadow_db, double tx_power_dbm)
    {
        const double tx_w = std::pow(10.0, (tx_power_dbm - 30.0) / 10.0);
        const double rx_amplitude = std::sqrt(tx_w * std::pow(10.0, (-path_loss_db - shadow_db) / 10.0));
        const double scale = rx_amplitude / std::sqrt(tx_w);
        CVec out(cir.begin(), cir.end());
        for (auto &v : out)
            v *= scale;
        return out;
    }

    CVec estimate_channel_ls(std::span<const cdouble> received, std::span<const cdouble> reference)
    {
        if (received.size() != reference.size())
            throw std::invalid_argument("estimate_channel_ls: received and reference differ in length");
        CVec out(received.size());
        for (std::size_t k = 0; k < received.size(); ++k)
        {
            if (reference[k] == cdouble(0.0, 0.0))
                throw std::invalid_argument("estimate_channel_ls: zero reference symbol at subcarrier " +
                                            std::to_string(k));
            out[k] = received[k] / reference[k];
        }
        return out;
    }

    double rsrp_linear(std::span<const cdouble> cir)
    {
        if (cir.empty())
            return 0.0;
        double acc = 0.0;
        for (const auto &v : cir)
            acc += std::norm(v);
        return acc / static_cast<double>(cir.size());
    }

    double rsrp_dbm(std::span<const cdouble> cir)
    {
        const double lin = rsrp_linear(cir);
        if (lin <= 0.0)
            return -std::numeric_limits<double>::infinity();
        return 10.0 * std::log10(lin) + 30.0;
    }

    ChannelRealization synthesize_link(const Position &ue, const Position &trp, bool los, const ScenarioConfig &config,
                                       Rng &rng, bool keep_freq_response)
    {
        ChannelRealization out;
        out.los = los;
        out.d_3d_m = std::max(distance_3d(ue, trp), 1.0);
        out.path_loss_db = path_loss(out.d_3d_m, config.carrier_ghz);
        std::normal_distribution<double> shadow(0.0, config.shadow_sigma_db);
        out.shadow_db = config.shadow_sigma_db > 0.0 ? shadow(rng) : 0.0;

        const MultipathProfile profile = draw_multipath(los, out.d_3d_m, config, rng);
        CVec h = freq_response(profile, config, rng);

        if (config.multipath.snr_db)
        {
            // Unit-modulus QPSK reference, AWGN at the requested per-subcarrier SNR.
            double signal = 0.0;
            for (const auto &v : h)
                signal += std::norm(v);
            signal /= static_cast<double>(h.size());
            const double noise_std = std::sqrt(signal / std::pow(10.0, *config.multipath.snr_db / 10.0) / 2.0);
            std::normal_distribution<double> gauss(0.0, 1.0);
            std::bernoulli_distribution bit(0.5);
            CVec x(h.size()), y(h.size());
            for (std::size_t k = 0; k < h.size(); ++k)
            {
                x[k] = cdouble(bit(rng) ? 1.0 : -1.0, bit(rng) ? 1.0 : -1.0) / std::numbers::sqrt2;
                const double nr = gauss(rng), ni = gauss(rng);
                y[k] = h[k] * x[k] + noise_std * cdouble(nr, ni);
            }
            h = estimate_channel_ls(y, x);
        }

        const CVec cir_unit = cir_from_freq(h, config);
        out.cir = apply_link_budget(cir_unit, out.path_loss_db, out.shadow_db, config.tx_power_dbm);
        if (keep_freq_response)
        {
            const double gain = std::pow(10.0, (-out.path_loss_db - out.shadow_db) / 20.0);
            for (auto &v : h)
                v *= gain;
            out.freq_response = std::move(h);
        }
        out.rsrp_dbm = rsrp_dbm(out.cir);
        return out;
    }

} // namespace locnet
