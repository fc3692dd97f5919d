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

#ifndef LOCNET_SCENARIO_HPP
#define LOCNET_SCENARIO_HPP

#include "locnet/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace locnet
{
    // Tapped-delay-line stand-in for a ray-based channel generator.
    struct MultipathConfig
    {
        double tau_rms_s = 50e-9;        // decay constant of the exponential power-delay profile
        double delay_span_factor = 4.0;  // excess delays uniform on [0, factor * tau_rms]
        int n_paths_min = 8;
        int n_paths_max = 24;
        double rician_k_db = 7.0;        // power ratio of the LoS path vs. diffuse paths
        std::optional<double> snr_db;    // receiver noise before LS estimation, disabled when empty
    };

    // InF-DH deployment and RF parameters. Defaults are the 18-TRP, 256-tap layout.
    struct ScenarioConfig
    {
        double hall_length_m = 120.0;
        double hall_width_m = 60.0;
        int n_trp = 18;
        double trp_height_m = 8.0;
        int grid_rows = 3;
        int grid_cols = 6;
        double trp_spacing_m = 20.0;
        double ue_height_m = 1.5;
        double clutter_density = 0.6;
        double clutter_height_m = 6.0;
        double clutter_size_m = 2.0;
        double shadow_sigma_db = 4.0;
        double carrier_ghz = 3.64;
        double bandwidth_hz = 100e6;
        int n_subcarriers = 4096;
        double subcarrier_spacing_hz = 30e3;
        int cir_taps = 256;
        double tx_power_dbm = 24.0;
        std::uint64_t rng_seed = 1;

        // Replaces the clutter-derived LoS decay distance when set.
        std::optional<double> los_decay_override_m;

        MultipathConfig multipath;

        // Throws std::invalid_argument naming the first violated invariant.
        void validate() const;
    };

    // 8 TRPs in a 2x4 grid, 64 CIR taps. Everything else as the default layout.
    ScenarioConfig desk_scale_scenario();

    struct Position
    {
        double x_m = 0.0;
        double y_m = 0.0;
        double z_m = 0.0;

        friend bool operator==(const Position &, const Position &) = default;
    };

    double distance_2d(const Position &a, const Position &b);
    double distance_3d(const Position &a, const Position &b);

    // Axis-aligned bounding rectangle of the TRP grid (its convex hull for this layout).
    struct Hull
    {
        double x_min, x_max, y_min, y_max;

        double center_x() const { return 0.5 * (x_min + x_max); }
        double center_y() const { return 0.5 * (y_min + y_max); }
        bool contains(double x, double y) const { return x >= x_min && x <= x_max && y >= y_min && y <= y_max; }
    };

    // TRPs centered in the hall, row-major from (min-x, min-y): index = row * grid_cols + col.
    std::vector<Position> build_trp_grid(const ScenarioConfig &config);

    Hull trp_hull(const ScenarioConfig &config);

    // Uniform drops over the TRP hull at UE height.
    std::vector<Position> drop_ues(const ScenarioConfig &config, std::size_t count, Rng &rng);

    // Decay distance k of the LoS probability exp(-d / k).
    double los_decay_distance(const ScenarioConfig &config);

    double los_probability(double d_2d_m, const ScenarioConfig &config);

    // Row-major n_ue x n_trp matrix of independent Bernoulli LoS draws.
    struct LinkStates
    {
        std::size_t n_ue = 0;
        std::size_t n_trp = 0;
        std::vector<std::uint8_t> los;

        bool at(std::size_t ue, std::size_t trp) const { return los[ue * n_trp + trp] != 0; }
    };

    LinkStates classify_links(const std::vector<Position> &ues, const std::vector<Position> &trps,
                              const ScenarioConfig &config, Rng &rng);

} // namespace locnet

#endif
