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

#include <iostream>
#include <random>
#include <vector>

#include "beamformer.hpp"
#include "channel.hpp"
#include "codebook.hpp"
#include "pwmmse.hpp"
#include "system.hpp"
#include "wmmse.hpp"

namespace pcbeam {

struct FullyDigitalResult
{
    FullyDigitalBeamformer beamformer;
    WmmseState state;
};

// Unconstrained-hardware reference: the same weighted-MMSE machinery applied
// to the raw channels. The iterates always stay in the span of the channel
// vectors (the precoder columns are regularized solves against channel
// vectors, starting from matched columns), so the problem is reduced exactly
// to that K-dimensional span with an orthonormal basis from a thin QR.
inline FullyDigitalResult run_fully_digital(const std::vector<ChannelRealization>& channels,
                                            const SystemConfig& cfg, const WmmseOptions& opts = {})
{
    cfg.validate();
    arma::cx_mat h(cfg.n_bs, cfg.k_users);
    for (arma::uword k = 0; k < cfg.k_users; ++k)
        h.col(k) = channels[k].vector;

    arma::cx_mat basis, reduced;
    if (!arma::qr_econ(basis, reduced, h))
        throw std::runtime_error("run_fully_digital: QR factorization failed");

    WmmseResult core = wmmse_solve(reduced, cfg.total_power, cfg.noise_var, opts);
    FullyDigitalResult result;
    result.beamformer.matrix = basis * core.precoder;
    result.state = std::move(core.state);
    return result;
}

struct TshResult
{
    AnalogBeamformer analog;
    DigitalBeamformer digital;
    SweepSelection sweep;
    bool regularized = false;
};

// Two-stage sweep-then-zero-force hybrid scheme: the analog stage is the
// swept codeword of each user, the digital stage inverts the (possibly
// noisily estimated) effective channel matrix and rescales columns to unit
// norm. eff_csi_snr_linear = infinity means perfect effective CSI.
inline TshResult run_tsh(const std::vector<ChannelRealization>& channels, const Codebook& codebook,
                         const SystemConfig& cfg, double sweep_snr_linear, double eff_csi_snr_linear,
                         std::uint64_t seed)
{
    cfg.validate();
    TshResult result;
    result.sweep = beam_sweep(channels, codebook, cfg, sweep_snr_linear, seed_stream(seed, 1));
    result.analog.subarray_vectors = result.sweep.codewords;

    arma::cx_mat eff = effective_channels(result.analog, channels);
    if (!std::isinf(eff_csi_snr_linear)) {
        const double mean_power = arma::accu(arma::square(arma::abs(eff))) / static_cast<double>(eff.n_elem);
        const double sd = std::sqrt(0.5 * mean_power / eff_csi_snr_linear);
        std::mt19937_64 rng(seed_stream(seed, 2));
        std::normal_distribution<double> comp(0.0, 1.0);
        for (auto& v : eff)
            v += cxd{sd * comp(rng), sd * comp(rng)};
    }

    // Rows of the estimated channel matrix are h_k^H; zero forcing inverts it.
    const arma::cx_mat rows = eff.t();
    const arma::uword k_users = cfg.k_users;
    arma::cx_mat zf;
    if (arma::rcond(rows) < 1e-12) {
        const arma::cx_mat gram = rows * rows.t();
        const double loading = 1e-8 * std::abs(arma::trace(gram)) / static_cast<double>(k_users);
        zf = rows.t() * arma::inv(gram + loading * arma::cx_mat(arma::eye(k_users, k_users),
                                                                arma::zeros(k_users, k_users)));
        result.regularized = true;
        std::cerr << "pcbeam: warning: rank-deficient effective channels in zero forcing, "
                     "applied diagonal loading\n";
    } else {
        zf = arma::solve(rows, arma::cx_mat(arma::eye(k_users, k_users), arma::zeros(k_users, k_users)));
    }

    for (arma::uword k = 0; k < k_users; ++k) {
        const double n = arma::norm(zf.col(k));
        if (n > 0.0)
            zf.col(k) /= n;
    }
    result.digital.matrix = std::move(zf);
    return result;
}

} // namespace pcbeam
