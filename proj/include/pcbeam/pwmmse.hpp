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

#include <vector>

#include "beamformer.hpp"
#include "channel.hpp"
#include "system.hpp"
#include "wmmse.hpp"

namespace pcbeam {

// Analog stage under perfect CSI: each phase shifter conjugates the phase of
// its own channel entry, so the subarray combines its channel coherently and
// |f_k^H h_(S_k)| = sum_t |h_t| / sqrt(n_s). A zero channel entry gets phase 0.
inline AnalogBeamformer phase_align_analog(const std::vector<ChannelRealization>& channels,
                                           const SystemConfig& cfg)
{
    if (channels.size() != cfg.k_users)
        throw std::invalid_argument("phase_align_analog: need one channel per user");
    const arma::uword ns = cfg.n_s();
    const double modulus = 1.0 / std::sqrt(static_cast<double>(ns));

    AnalogBeamformer analog;
    analog.subarray_vectors.reserve(cfg.k_users);
    for (arma::uword k = 0; k < cfg.k_users; ++k) {
        const arma::cx_vec& h = channels[k].vector;
        if (h.n_elem != cfg.n_bs)
            throw std::invalid_argument("phase_align_analog: channel length mismatch");
        arma::cx_vec f(ns);
        for (arma::uword n = 0; n < ns; ++n) {
            const cxd entry = h(k * ns + n);
            f(n) = std::polar(modulus, entry == cxd{} ? 0.0 : std::arg(entry));
        }
        analog.subarray_vectors.push_back(std::move(f));
    }
    return analog;
}

// Effective channel matrix seen by the digital stage; column k = F^H h_k.
inline arma::cx_mat effective_channels(const AnalogBeamformer& analog,
                                       const std::vector<ChannelRealization>& channels)
{
    const arma::uword k_users = channels.size();
    arma::cx_mat eff(analog.blocks(), k_users);
    for (arma::uword k = 0; k < k_users; ++k)
        eff.col(k) = analog.effective_channel(channels[k].vector);
    return eff;
}

struct PwmmseResult
{
    AnalogBeamformer analog;
    DigitalBeamformer digital;
    WmmseState state;
};

// Hybrid beamforming under perfect CSI: phase-aligned analog stage, then
// weighted-MMSE alternating optimization of the digital stage on the
// effective channels.
inline PwmmseResult run_pwmmse(const std::vector<ChannelRealization>& channels, const SystemConfig& cfg,
                               const WmmseOptions& opts = {})
{
    cfg.validate();
    PwmmseResult result;
    result.analog = phase_align_analog(channels, cfg);
    const arma::cx_mat eff = effective_channels(result.analog, channels);
    WmmseResult core = wmmse_solve(eff, cfg.total_power, cfg.noise_var, opts);
    result.digital.matrix = std::move(core.precoder);
    result.state = std::move(core.state);
    return result;
}

} // namespace pcbeam
