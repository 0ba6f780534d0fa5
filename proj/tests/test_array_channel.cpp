// SPDX-License-Identifier: Apache-2.0
//
// pcbeam: multiuser beamforming for partially-connected mmWave massive MIMO
// Copyright (C) 2026 the pcbeam contributors
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

#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

using namespace pcbeam;

TEST_CASE("system config validation")
{
    CHECK_NOTHROW(make_system_config(64, 4, 4, 4.0, 1.0));
    CHECK_THROWS_AS(make_system_config(65, 4, 4, 4.0, 1.0), std::invalid_argument); // not divisible
    CHECK_THROWS_AS(make_system_config(64, 4, 3, 4.0, 1.0), std::invalid_argument); // users != chains
    CHECK_THROWS_AS(make_system_config(64, 4, 4, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_system_config(64, 4, 4, 4.0, -1.0), std::invalid_argument);
    CHECK(make_system_config(64, 4, 4, 4.0, 1.0).n_s() == 16);
}

TEST_CASE("steering vector closed forms")
{
    const arma::cx_vec broadside = steering_vector(0.0, 4);
    for (const auto& v : broadside)
        CHECK(std::abs(v - cxd{0.5, 0.0}) < 1e-15);

    const arma::cx_vec endfire = steering_vector(1.0, 2);
    CHECK(std::abs(endfire(0) - cxd{1.0 / std::sqrt(2.0), 0.0}) < 1e-15);
    CHECK(std::abs(endfire(1) - cxd{-1.0 / std::sqrt(2.0), 0.0}) < 1e-12);

    const arma::cx_vec mid = steering_vector(0.5, 8);
    CHECK(std::abs(mid(2) - cxd{-1.0 / std::sqrt(8.0), 0.0}) < 1e-12); // phase pi*2*0.5
}

TEST_CASE("steering vector has unit norm for random angles and sizes")
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> angle(-1.0, 1.0);
    std::uniform_int_distribution<arma::uword> size(1, 700);
    for (int i = 0; i < 100; ++i) {
        const arma::cx_vec a = steering_vector(-angle(rng), size(rng));
        CHECK(std::abs(arma::norm(a) - 1.0) < 1e-12);
    }
}

TEST_CASE("steering vector rejects bad arguments")
{
    CHECK_THROWS_AS(steering_vector(0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(steering_vector(-1.0, 4), std::invalid_argument); // open lower end
    CHECK_THROWS_AS(steering_vector(1.5, 4), std::invalid_argument);
    CHECK_NOTHROW(steering_vector(1.0, 4));
}

TEST_CASE("subarray steering slices the full array vector")
{
    const SystemConfig cfg = make_system_config(8, 2, 2, 2.0, 1.0);

    SECTION("zero angle")
    {
        const arma::cx_vec s = subarray_steering(0.0, 1, cfg);
        REQUIRE(s.n_elem == 4);
        for (const auto& v : s)
            CHECK(std::abs(v - cxd{1.0 / std::sqrt(8.0), 0.0}) < 1e-15);
    }

    SECTION("first block is the plain prefix")
    {
        const arma::cx_vec full = steering_vector(0.37, 8);
        const arma::cx_vec s = subarray_steering(0.37, 0, cfg);
        CHECK(arma::norm(s - full.subvec(0, 3)) == 0.0);
    }

    SECTION("second-block leading entry matches the closed-form phase")
    {
        // entry 4 of the full vector at sine 0.25: phase pi * 4 * 0.25 = pi
        const arma::cx_vec s = subarray_steering(0.25, 1, cfg);
        CHECK(std::abs(s(0) - cxd{-1.0 / std::sqrt(8.0), 0.0}) < 1e-12);
    }

    SECTION("entry modulus is 1/sqrt(n_bs)")
    {
        const arma::cx_vec s = subarray_steering(-0.613, 1, cfg);
        for (const auto& v : s)
            CHECK(std::abs(std::abs(v) - 1.0 / std::sqrt(8.0)) < 1e-14);
    }

    SECTION("blocks concatenate to the full vector exactly")
    {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> angle(-1.0, 1.0);
        const SystemConfig big = make_system_config(96, 4, 4, 4.0, 1.0);
        for (int i = 0; i < 20; ++i) {
            const double theta = -angle(rng);
            const arma::cx_vec full = steering_vector(theta, 96);
            arma::cx_vec cat(96);
            for (arma::uword q = 0; q < 4; ++q)
                cat.subvec(q * 24, q * 24 + 23) = subarray_steering(theta, q, big);
            CHECK(arma::norm(cat - full) == 0.0);
        }
    }

    SECTION("index out of range")
    {
        CHECK_THROWS_AS(subarray_steering(0.0, 2, cfg), std::invalid_argument);
    }
}

TEST_CASE("single-path channel is a scaled steering vector")
{
    const std::vector<PathComponent> paths{{cxd{1.0, 0.0}, 0.3}};
    const arma::cx_vec h = synthesize_channel(paths, 16);
    const arma::cx_vec expected = std::sqrt(16.0) * steering_vector(0.3, 16);
    CHECK(arma::norm(h - expected) < 1e-12);
}

TEST_CASE("channel generation is deterministic in the seed")
{
    const SystemConfig cfg = make_system_config(32, 4, 4, 4.0, 1.0);
    const ChannelParams params{3, 1.0, 0.01};
    const ChannelRealization a = generate_channel(std::uint64_t{42}, cfg, params);
    const ChannelRealization b = generate_channel(std::uint64_t{42}, cfg, params);
    REQUIRE(a.paths.size() == b.paths.size());
    for (std::size_t l = 0; l < a.paths.size(); ++l) {
        CHECK(a.paths[l].gain == b.paths[l].gain);
        CHECK(a.paths[l].aod_sine == b.paths[l].aod_sine);
    }
    CHECK(arma::norm(a.vector - b.vector) == 0.0);

    const ChannelRealization c = generate_channel(std::uint64_t{43}, cfg, params);
    CHECK(arma::norm(a.vector - c.vector) > 0.0);
}

TEST_CASE("stored channel vector matches its path synthesis")
{
    const SystemConfig cfg = make_system_config(64, 4, 4, 4.0, 1.0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const ChannelRealization ch = generate_channel(seed, cfg, {});
        CHECK(arma::norm(ch.vector - synthesize_channel(ch.paths, cfg.n_bs)) < 1e-12);
    }
}

TEST_CASE("drawn AoD sines stay in the half-open domain")
{
    const SystemConfig cfg = make_system_config(8, 2, 2, 2.0, 1.0);
    for (std::uint64_t seed = 0; seed < 200; ++seed)
        for (const auto& p : generate_channel(seed, cfg, {}).paths) {
            CHECK(p.aod_sine > -1.0);
            CHECK(p.aod_sine <= 1.0);
        }
}

TEST_CASE("channel parameter validation")
{
    const SystemConfig cfg = make_system_config(8, 2, 2, 2.0, 1.0);
    CHECK_THROWS_AS(generate_channel(std::uint64_t{1}, cfg, ChannelParams{0, 1.0, 0.01}),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_channel(std::uint64_t{1}, cfg, ChannelParams{3, -1.0, 0.01}),
                    std::invalid_argument);
}

TEST_CASE("mean channel energy matches the independent-gain expansion")
{
    // E||h||^2 = n_bs * (los_var + (L-1) nlos_var) / L = 512 * 1.02 / 3
    const SystemConfig cfg = make_system_config(512, 4, 4, 4.0, 1.0);
    const ChannelParams params{3, 1.0, 0.01};
    const double expected = 512.0 * 1.02 / 3.0;
    std::mt19937_64 rng(2024);
    double acc = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const ChannelRealization ch = generate_channel(rng, cfg, params);
        acc += arma::dot(arma::square(arma::abs(ch.vector)), arma::ones(cfg.n_bs));
    }
    const double mean = acc / draws;
    CHECK(std::abs(mean - expected) / expected < 0.02);
}
