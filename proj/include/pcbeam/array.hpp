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

#include "system.hpp"

namespace pcbeam {

// Steering vector of an n-element half-wavelength ULA towards AoD sine theta,
// entry m = exp(j pi m theta) / sqrt(n). Unit Euclidean norm. The valid AoD
// sine domain is (-1, 1]; physical angles live in (-pi/2, pi/2].
inline arma::cx_vec steering_vector(double aod_sine, arma::uword n)
{
    if (n == 0)
        throw std::invalid_argument("steering_vector: antenna count must be positive");
    if (!(aod_sine > -1.0) || !(aod_sine <= 1.0))
        throw std::invalid_argument("steering_vector: AoD sine must lie in (-1, 1]");

    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    arma::cx_vec a(n);
    for (arma::uword m = 0; m < n; ++m)
        a(m) = std::polar(scale, arma::datum::pi * static_cast<double>(m) * aod_sine);
    return a;
}

// Rows of the full-array steering vector that belong to one subarray.
// Subarrays are indexed 0-based; subarray q owns antennas q*n_s .. (q+1)*n_s-1.
// Entries keep the 1/sqrt(n_bs) full-array scaling and the block phase offset.
inline arma::cx_vec subarray_steering(double aod_sine, arma::uword subarray, const SystemConfig& cfg)
{
    if (subarray >= cfg.n_rf)
        throw std::invalid_argument("subarray_steering: subarray index out of range");
    const arma::uword ns = cfg.n_s();
    return steering_vector(aod_sine, cfg.n_bs).subvec(subarray * ns, (subarray + 1) * ns - 1);
}

} // namespace pcbeam
