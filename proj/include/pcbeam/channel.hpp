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

#pragma once

#include <random>
#include <vector>

#include "array.hpp"
#include "system.hpp"

namespace pcbeam {

// One propagation path: complex gain and AoD sine in (-1, 1].
struct PathComponent
{
    cxd gain{};
    double aod_sine = 0.0;
};

// Sparse multipath channel generation parameters. Path 1 is the line-of-sight
// path; the remaining n_paths - 1 paths are non-line-of-sight. Gains are
// circular complex Gaussian with the given variances, AoD sines are uniform
// on (-1, 1].
struct ChannelParams
{
    arma::uword n_paths = 3;
    double los_var = 1.0;
    double nlos_var = 0.01;

    void validate() const
    {
        if (n_paths == 0)
            throw std::invalid_argument("ChannelParams: n_paths must be at least 1");
        if (!(los_var > 0.0) || !(nlos_var > 0.0))
            throw std::invalid_argument("ChannelParams: path gain variances must be positive");
    }
};

// A drawn channel: the path list and the vector it synthesizes,
// h = sqrt(n_bs / L) * sum_l gain_l * a(aod_l).
struct ChannelRealization
{
    std::vector<PathComponent> paths;
    arma::cx_vec vector;
};

inline arma::cx_vec synthesize_channel(const std::vector<PathComponent>& paths, arma::uword n_bs)
{
    if (paths.empty())
        throw std::invalid_argument("synthesize_channel: need at least one path");
    arma::cx_vec h(n_bs, arma::fill::zeros);
    for (const auto& p : paths)
        h += p.gain * steering_vector(p.aod_sine, n_bs);
    h *= std::sqrt(static_cast<double>(n_bs) / static_cast<double>(paths.size()));
    return h;
}

inline cxd draw_complex_gaussian(std::mt19937_64& rng, double variance)
{
    std::normal_distribution<double> comp(0.0, std::sqrt(variance / 2.0));
    const double re = comp(rng);
    const double im = comp(rng);
    return {re, im};
}

// Uniform draw on the AoD sine domain (-1, 1].
inline double draw_aod_sine(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> unif(-1.0, 1.0); // [-1, 1)
    return -unif(rng);
}

inline ChannelRealization generate_channel(std::mt19937_64& rng, const SystemConfig& cfg,
                                           const ChannelParams& params)
{
    params.validate();
    ChannelRealization ch;
    ch.paths.reserve(params.n_paths);
    for (arma::uword l = 0; l < params.n_paths; ++l) {
        PathComponent p;
        p.gain = draw_complex_gaussian(rng, l == 0 ? params.los_var : params.nlos_var);
        p.aod_sine = draw_aod_sine(rng);
        ch.paths.push_back(p);
    }
    ch.vector = synthesize_channel(ch.paths, cfg.n_bs);
    return ch;
}

inline ChannelRealization generate_channel(std::uint64_t seed, const SystemConfig& cfg,
                                           const ChannelParams& params)
{
    std::mt19937_64 rng(seed);
    return generate_channel(rng, cfg, params);
}

// Channels of all users for one trial, drawn from one seeded engine so the
// whole trial is reproducible independently of execution order.
inline std::vector<ChannelRealization> generate_user_channels(std::uint64_t seed, const SystemConfig& cfg,
                                                              const ChannelParams& params)
{
    std::mt19937_64 rng(seed);
    std::vector<ChannelRealization> channels;
    channels.reserve(cfg.k_users);
    for (arma::uword k = 0; k < cfg.k_users; ++k)
        channels.push_back(generate_channel(rng, cfg, params));
    return channels;
}

} // namespace pcbeam
