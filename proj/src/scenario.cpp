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

#include "locnet/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace locnet
{
    namespace
    {
        void require(bool ok, const std::string &what)
        {
            if (!ok)
                throw std::invalid_argument("ScenarioConfig: " + what);
        }
    } // namespace

    void ScenarioConfig::validate() const
    {
        require(hall_length_m > 0.0 && hall_width_m > 0.0, "hall dimensions must be positive");
        require(grid_rows >= 1 && grid_cols >= 1, "grid_rows and grid_cols must be >= 1");
        require(grid_rows * grid_cols == n_trp, "grid_rows * grid_cols must equal n_trp");
        require(trp_spacing_m >= 0.0, "trp_spacing_m must be nonnegative");
        require((grid_cols - 1) * trp_spacing_m <= hall_length_m, "TRP grid exceeds hall length");
        require((grid_rows - 1) * trp_spacing_m <= hall_width_m, "TRP grid exceeds hall width");
        require(clutter_density > 0.0 && clutter_density < 1.0, "clutter_density must lie in (0, 1)");
        require(clutter_size_m > 0.0, "clutter_size_m must be positive");
        require(ue_height_m < clutter_height_m && clutter_height_m < trp_height_m,
                "InF-DH requires ue_height_m < clutter_height_m < trp_height_m");
        require(shadow_sigma_db >= 0.0, "shadow_sigma_db must be nonnegative");
        require(carrier_ghz > 0.0, "carrier_ghz must be positive");
        require(bandwidth_hz > 0.0 && subcarrier_spacing_hz > 0.0, "bandwidth and subcarrier spacing must be positive");
        require(n_subcarriers >= 1, "n_subcarriers must be >= 1");
        require(cir_taps >= 1 && cir_taps <= n_subcarriers, "cir_taps must lie in [1, n_subcarriers]");
        require(!los_decay_override_m || *los_decay_override_m > 0.0, "LoS decay override must be positive");

        const auto &mp = multipath;
        require(mp.tau_rms_s > 0.0, "multipath.tau_rms_s must be positive");
        require(mp.delay_span_factor >= 0.0, "multipath.delay_span_factor must be nonnegative");
        require(mp.n_paths_min >= 1 && mp.n_paths_max >= mp.n_paths_min, "multipath path-count range invalid");
    }

    ScenarioConfig desk_scale_scenario()
    {
        ScenarioConfig c;
        c.n_trp = 8;
        c.grid_rows = 2;
        c.grid_cols = 4;
        c.cir_taps = 64;
        return c;
    }

    double distance_2d(const Position &a, const Position &b)
    {
        return std::hypot(a.x_m - b.x_m, a.y_m - b.y_m);
    }

    double distance_3d(const Position &a, const Position &b)
    {
        const double dx = a.x_m - b.x_m, dy = a.y_m - b.y_m, dz = a.z_m - b.z_m;
        return std::sqrt(dx * dx + dy * dy + dz * dz);
    }

    Hull trp_hull(const ScenarioConfig &config)
    {
        config.validate();
        const double span_x = (config.grid_cols - 1) * config.trp_spacing_m;
        const double span_y = (config.grid_rows - 1) * config.trp_spacing_m;
        const double x0 = 0.5 * (config.hall_length_m - span_x);
        const double y0 = 0.5 * (config.hall_width_m - span_y);
        return {x0, x0 + span_x, y0, y0 + span_y};
    }

    std::vector<Position> build_trp_grid(const ScenarioConfig &config)
    {
        const Hull hull = trp_hull(config);
        std::vector<Position> trps;
        trps.reserve(static_cast<std::size_t>(config.n_trp));
        for (int r = 0; r < config.grid_rows; ++r)
            for (int c = 0; c < config.grid_cols; ++c)
                trps.push_back({hull.x_min + c * config.trp_spacing_m, hull.y_min + r * config.trp_spacing_m,
                                config.trp_height_m});
        return trps;
    }

    std::vector<Position> drop_ues(const ScenarioConfig &config, std::size_t count, Rng &rng)
    {
        if (count == 0)
            throw std::invalid_argument("drop_ues: count must be >= 1");
        const Hull hull = trp_hull(config);
        std::uniform_real_distribution<double> ux(hull.x_min, hull.x_max);
        std::uniform_real_distribution<double> uy(hull.y_min, hull.y_max);
        std::vector<Position> ues(count);
        for (auto &p : ues)
        {
            // Degenerate hulls collapse the distribution to a point.
            p.x_m = hull.x_max > hull.x_min ? ux(rng) : hull.x_min;
            p.y_m = hull.y_max > hull.y_min ? uy(rng) : hull.y_min;
            p.z_m = config.ue_height_m;
        }
        return ues;
    }

    double los_decay_distance(const ScenarioConfig &config)
    {
        if (config.clutter_height_m <= config.ue_height_m)
            throw std::invalid_argument("los_probability: clutter height must exceed UE height");
        if (config.los_decay_override_m)
            return *config.los_decay_override_m;
        const double k_subsce = -config.clutter_size_m / std::log(1.0 - config.clutter_density);
        return k_subsce * (config.trp_height_m - config.ue_height_m) / (config.clutter_height_m - config.ue_height_m);
    }

    double los_probability(double d_2d_m, const ScenarioConfig &config)
    {
        if (!(d_2d_m >= 0.0))
            throw std::invalid_argument("los_probability: distance must be nonnegative");
        return std::exp(-d_2d_m / los_decay_distance(config));
    }

    LinkStates classify_links(const std::vector<Position> &ues, const std::vector<Position> &trps,
                              const ScenarioConfig &config, Rng &rng)
    {
        if (ues.empty() || trps.empty())
            throw std::invalid_argument("classify_links: inputs must be nonempty");
        const double k = los_decay_distance(config);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        LinkStates out{ues.size(), trps.size(), std::vector<std::uint8_t>(ues.size() * trps.size())};
        for (std::size_t i = 0; i < ues.size(); ++i)
            for (std::size_t j = 0; j < trps.size(); ++j)
            {
                const double p = std::exp(-distance_2d(ues[i], trps[j]) / k);
                out.los[i * trps.size() + j] = u01(rng) < p ? 1 : 0;
            }
        return out;
    }

} // namespace locnet
