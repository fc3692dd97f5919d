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

#ifndef LOCNET_CHANNEL_HPP
#define LOCNET_CHANNEL_HPP

#include "locnet/rng.hpp"
#include "locnet/scenario.hpp"

#include <complex>
#include <span>
#include <vector>

namespace locnet
{
    using cdouble = std::complex<double>;
    using CVec = std::vector<cdouble>;

    inline constexpr double speed_of_light = 299792458.0;

    // InF-DH path loss in dB, d_3d_m >= 1 m, f_c in GHz.
    double path_loss_nlos(double d_3d_m, double f_c_ghz);
    double path_loss_los(double d_3d_m, double f_c_ghz);
    double path_loss(double d_3d_m, double f_c_ghz);

    struct MultipathProfile
    {
        bool los = false;
        std::vector<double> delays_s;      // ascending, absolute (geometric delay included)
        std::vector<double> powers_linear; // unit sum
        double geometric_delay_s = 0.0;    // d_3D / c

        std::size_t n_paths() const { return delays_s.size(); }
        // Power-weighted mean of (delay - geometric delay).
        double mean_excess_delay_s() const;
    };

    // Excess delays are drawn uniform on [0, span * tau_rms] and offset by the geometric
    // delay d_3D / c; powers follow exp(-excess / tau_rms). A LoS link gets an extra path at
    // zero excess delay carrying K / (K + 1) of the power.
    MultipathProfile draw_multipath(bool los, double d_3d_m, const ScenarioConfig &config, Rng &rng);

    // H(k) = sum_p g_p exp(-j 2 pi k df tau_p), k = 0..N-1. Diffuse taps are circular Gaussian
    // with variance powers[p]; the LoS tap has deterministic amplitude and carrier phase.
    CVec freq_response(const MultipathProfile &profile, const ScenarioConfig &config, Rng &rng);

    // Same sum for caller-provided complex path gains.
    CVec freq_response_from_gains(std::span<const double> delays_s, std::span<const cdouble> gains,
                                  int n_subcarriers, double subcarrier_spacing_hz);

    // h(n) = (1/N) sum_k H(k) exp(+j 2 pi k n / N). A flat unit response maps to a unit impulse.
    CVec inverse_dft(std::span<const cdouble> freq);

    // inverse_dft truncated to the first cir_taps coefficients.
    CVec cir_from_freq(std::span<const cdouble> freq, const ScenarioConfig &config);

    // Net amplitude scaling by sqrt(10^(-(PL + SF) / 10)): transmit power cancels out once
    // the received CIR is normalized by it.
    CVec apply_link_budget(std::span<const cdouble> cir, double path_loss_db, double shadow_db, double tx_power_dbm);

    // Least-squares per-subcarrier estimate Y(k) / X(k).
    CVec estimate_channel_ls(std::span<const cdouble> received, std::span<const cdouble> reference);

    // Mean squared tap magnitude. Zero for an all-zero CIR.
    double rsrp_linear(std::span<const cdouble> cir);
    // 10 log10(linear) + 30; -infinity for an all-zero CIR.
    double rsrp_dbm(std::span<const cdouble> cir);

    struct ChannelRealization
    {
        bool los = false;
        double d_3d_m = 0.0;
        double path_loss_db = 0.0;
        double shadow_db = 0.0;
        CVec freq_response; // after link budget, length n_subcarriers (empty when not retained)
        CVec cir;           // after link budget, length cir_taps
        double rsrp_dbm = 0.0;
    };

    // Full per-link pipeline: profile -> H(k) -> [noise + LS estimate] -> IFFT -> truncate -> budget -> RSRP.
    ChannelRealization synthesize_link(const Position &ue, const Position &trp, bool los, const ScenarioConfig &config,
                                       Rng &rng, bool keep_freq_response = true);

} // namespace locnet

#endif
