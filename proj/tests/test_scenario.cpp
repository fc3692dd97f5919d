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

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

using namespace locnet;
using Catch::Approx;

TEST_CASE("default TRP grid is a centered 6x3 layout at 20 m spacing", "[scenario]")
{
    const ScenarioConfig c;
    const auto trps = build_trp_grid(c);
    REQUIRE(trps.size() == 18);
    std::set<double> xs, ys;
    for (const auto &p : trps)
    {
        xs.insert(p.x_m);
        ys.insert(p.y_m);
        CHECK(p.z_m == 8.0);
    }
    CHECK(xs == std::set<double>{10, 30, 50, 70, 90, 110});
    CHECK(ys == std::set<double>{10, 30, 50});
    // Row-major from the low corner.
    CHECK(trps[0] == Position{10, 10, 8});
    CHECK(trps[5] == Position{110, 10, 8});
    CHECK(trps[6] == Position{10, 30, 8});
}

TEST_CASE("degenerate and small grids", "[scenario]")
{
    ScenarioConfig one;
    one.n_trp = 1;
    one.grid_rows = one.grid_cols = 1;
    one.trp_spacing_m = 0.0;
    const auto single = build_trp_grid(one);
    REQUIRE(single.size() == 1);
    CHECK(single[0] == Position{60, 30, one.trp_height_m});

    ScenarioConfig four;
    four.n_trp = 4;
    four.grid_rows = four.grid_cols = 2;
    four.hall_length_m = four.hall_width_m = 40.0;
    const auto trps = build_trp_grid(four);
    std::set<std::pair<double, double>> got;
    for (const auto &p : trps)
    {
        got.insert({p.x_m, p.y_m});
        CHECK(p.z_m == four.trp_height_m);
    }
    CHECK(got == std::set<std::pair<double, double>>{{10, 10}, {30, 10}, {10, 30}, {30, 30}});
}

TEST_CASE("grid positions do not depend on how rows and columns are enumerated", "[scenario]")
{
    ScenarioConfig a;
    ScenarioConfig b = a;
    std::swap(b.grid_rows, b.grid_cols);
    b.hall_length_m = a.hall_width_m;
    b.hall_width_m = a.hall_length_m;
    std::set<std::pair<double, double>> sa, sb;
    for (const auto &p : build_trp_grid(a))
        sa.insert({p.x_m, p.y_m});
    for (const auto &p : build_trp_grid(b))
        sb.insert({p.y_m, p.x_m});
    CHECK(sa == sb);
}

TEST_CASE("invalid scenario configs are rejected", "[scenario]")
{
    ScenarioConfig c;
    c.n_trp = 17;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = ScenarioConfig{};
    c.clutter_height_m = 9.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = ScenarioConfig{};
    c.trp_spacing_m = 30.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("UE drops stay inside the TRP hull at UE height", "[scenario]")
{
    const ScenarioConfig c;
    for (std::uint64_t seed : {1u, 2u, 99u})
    {
        Rng rng(seed);
        for (const auto &p : drop_ues(c, 5000, rng))
        {
            REQUIRE(p.x_m >= 10.0);
            REQUIRE(p.x_m <= 110.0);
            REQUIRE(p.y_m >= 10.0);
            REQUIRE(p.y_m <= 50.0);
            REQUIRE(p.z_m == 1.5);
        }
    }
}

TEST_CASE("UE drops average to the hull center and repeat under a fixed seed", "[scenario]")
{
    const ScenarioConfig c;
    Rng rng(7);
    const auto ues = drop_ues(c, 10000, rng);
    double mx = 0.0, my = 0.0;
    for (const auto &p : ues)
    {
        mx += p.x_m;
        my += p.y_m;
    }
    mx /= ues.size();
    my /= ues.size();
    CHECK(std::abs(mx - 60.0) < 0.6);
    CHECK(std::abs(my - 30.0) < 0.3);

    Rng again(7);
    CHECK(drop_ues(c, 10000, again) == ues);
}

TEST_CASE("LoS probability closed form", "[scenario]")
{
    const ScenarioConfig c;
    const double k = (-2.0 / std::log(0.4)) * (6.5 / 4.5);
    CHECK(los_decay_distance(c) == Approx(k).epsilon(1e-12));
    CHECK(k == Approx(3.1528).margin(1e-4));
    CHECK(los_probability(0.0, c) == 1.0);
    CHECK(los_probability(k, c) == Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(los_probability(100.0, c) < 1e-13);

    ScenarioConfig o = c;
    o.los_decay_override_m = 10.0;
    CHECK(los_probability(10.0, o) == Approx(std::exp(-1.0)));
}

TEST_CASE("LoS probability is a non-increasing probability", "[scenario]")
{
    const ScenarioConfig c;
    double prev = 1.0;
    for (int i = 0; i <= 2000; ++i)
    {
        const double p = los_probability(i * 0.05, c);
        REQUIRE(p >= 0.0);
        REQUIRE(p <= 1.0);
        REQUIRE(p <= prev);
        prev = p;
    }
    CHECK_THROWS_AS(los_probability(-1.0, c), std::invalid_argument);
}

TEST_CASE("link classification", "[scenario]")
{
    const ScenarioConfig c;
    const auto trps = build_trp_grid(c);

    SECTION("a UE under a TRP always sees it in LoS")
    {
        std::vector<Position> ues(50, Position{trps[3].x_m, trps[3].y_m, 1.5});
        Rng rng(3);
        const auto links = classify_links(ues, trps, c, rng);
        for (std::size_t i = 0; i < ues.size(); ++i)
            CHECK(links.at(i, 3));
    }

    SECTION("same seed, same flags")
    {
        Rng r1(11), r2(11), d1(5), d2(5);
        const auto ues1 = drop_ues(c, 200, d1);
        const auto ues2 = drop_ues(c, 200, d2);
        CHECK(classify_links(ues1, trps, c, r1).los == classify_links(ues2, trps, c, r2).los);
    }

    SECTION("empirical LoS rate matches the closed form within 3 sigma")
    {
        const double d = 3.0;
        const std::vector<Position> one_trp{{0.0, 0.0, 8.0}};
        std::vector<Position> ues(100000, Position{d, 0.0, 1.5});
        Rng rng(21);
        const auto links = classify_links(ues, one_trp, c, rng);
        const double n = static_cast<double>(ues.size());
        const double hits = static_cast<double>(std::count(links.los.begin(), links.los.end(), 1));
        const double p = los_probability(d, c);
        CHECK(std::abs(hits / n - p) < 3.0 * std::sqrt(p * (1 - p) / n));
    }
}
