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

#include <armadillo>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace pcbeam {

using cxd = std::complex<double>;

// Base-station and link parameters shared by every algorithm.
//
// Antennas form a half-wavelength ULA split into n_rf disjoint subarrays of
// n_s = n_bs / n_rf elements, one per RF chain. One single-antenna user is
// served per RF chain (k_users == n_rf). total_power and noise_var are
// linear quantities; the simulator convention is SNR = total_power / noise_var
// with total_power = k_users (unit per-stream power).
struct SystemConfig
{
    arma::uword n_bs = 64;     // transmit antennas
    arma::uword n_rf = 4;      // RF chains (= subarrays)
    arma::uword k_users = 4;   // single-antenna users
    double total_power = 4.0;  // linear transmit power P
    double noise_var = 1.0;    // linear noise power per user

    arma::uword n_s() const { return n_bs / n_rf; }

    void validate() const
    {
        if (n_bs == 0 || n_rf == 0 || k_users == 0)
            throw std::invalid_argument("SystemConfig: antenna, RF chain and user counts must be positive");
        if (n_bs % n_rf != 0)
            throw std::invalid_argument("SystemConfig: n_bs must be divisible by n_rf (got " +
                                        std::to_string(n_bs) + " / " + std::to_string(n_rf) + ")");
        if (k_users != n_rf)
            throw std::invalid_argument("SystemConfig: k_users must equal n_rf");
        if (!(total_power > 0.0))
            throw std::invalid_argument("SystemConfig: total_power must be positive");
        if (!(noise_var > 0.0))
            throw std::invalid_argument("SystemConfig: noise_var must be positive");
    }
};

inline SystemConfig make_system_config(arma::uword n_bs, arma::uword n_rf, arma::uword k_users,
                                       double total_power, double noise_var)
{
    SystemConfig cfg{n_bs, n_rf, k_users, total_power, noise_var};
    cfg.validate();
    return cfg;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

inline double deg_to_sine(double deg) { return std::sin(deg * arma::datum::pi / 180.0); }

inline double sine_to_deg(double s) { return std::asin(s) * 180.0 / arma::datum::pi; }

// Derives independent RNG streams from one root seed. Channel generation for
// trial t uses stream (root + t, 0); measurement-noise consumers use nonzero
// stream ids so they never collide with the channel draws.
inline std::uint64_t seed_stream(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace pcbeam
