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

#include <atomic>
#include <iostream>
#include <random>
#include <set>
#include <vector>

#include "amm_types.hpp"
#include "array.hpp"
#include "channel.hpp"
#include "system.hpp"

namespace pcbeam {

// Sweeping codebook for one subarray: constant-modulus steering codewords on
// a uniform AoD sine grid, each covering a cell of width 2/n_cb.
struct Codebook
{
    arma::cx_mat codewords;      // n_s x n_cb, column i has entry modulus 1/sqrt(n_s)
    std::vector<double> centers; // cell centers, spacing 2/n_cb
    double spacing = 0.0;

    arma::uword size() const { return codewords.n_cols; }

    AngleRange coverage(arma::uword i) const
    {
        return AngleRange{centers.at(i) - 0.5 * spacing, centers.at(i) + 0.5 * spacing};
    }
};

inline Codebook build_codebook(const SystemConfig& cfg, arma::uword n_cb)
{
    if (n_cb == 0)
        throw std::invalid_argument("build_codebook: need at least one codeword");
    Codebook cb;
    cb.spacing = 2.0 / static_cast<double>(n_cb);
    cb.codewords.set_size(cfg.n_s(), n_cb);
    cb.centers.reserve(n_cb);
    for (arma::uword i = 0; i < n_cb; ++i) {
        const double center = -1.0 + cb.spacing * (static_cast<double>(i) + 0.5);
        cb.centers.push_back(center);
        cb.codewords.col(i) = steering_vector(center, cfg.n_s());
    }
    return cb;
}

struct SweepSelection
{
    std::vector<arma::uword> indices;     // chosen codeword per user
    std::vector<arma::cx_vec> codewords;  // copies of the chosen columns
    std::vector<AngleRange> ranges;       // nominal coverage of the chosen cells
    arma::uword collisions = 0;           // users sharing a codeword with an earlier user
};

// Exhaustive pilot sweep: user k measures every codeword through its own
// subarray, y = h_(S_k)^H c + noise, and reports the strongest one. The pilot
// has unit power, so a linear sweep SNR of s means noise variance 1/s;
// sweep_snr_linear = infinity selects noiselessly.
inline SweepSelection beam_sweep(const std::vector<ChannelRealization>& channels, const Codebook& codebook,
                                 const SystemConfig& cfg, double sweep_snr_linear, std::uint64_t seed)
{
    if (codebook.size() == 0)
        throw std::invalid_argument("beam_sweep: empty codebook");
    const arma::uword ns = cfg.n_s();
    const bool noiseless = std::isinf(sweep_snr_linear);
    const double noise_sd = noiseless ? 0.0 : std::sqrt(0.5 / sweep_snr_linear);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> comp(0.0, 1.0);

    SweepSelection sel;
    for (arma::uword k = 0; k < cfg.k_users; ++k) {
        const arma::cx_vec slice = channels[k].vector.subvec(k * ns, (k + 1) * ns - 1);
        arma::cx_vec measurements = codebook.codewords.t() * slice; // entry i = c_i^H h_slice
        if (!noiseless)
            for (auto& y : measurements)
                y += cxd{noise_sd * comp(rng), noise_sd * comp(rng)};
        const arma::uword best = arma::index_max(arma::square(arma::abs(measurements)));
        sel.indices.push_back(best);
        sel.codewords.push_back(codebook.codewords.col(best));
        sel.ranges.push_back(codebook.coverage(best));
    }

    std::set<arma::uword> seen;
    for (arma::uword idx : sel.indices)
        if (!seen.insert(idx).second)
            ++sel.collisions;
    if (sel.collisions > 0) {
        static std::atomic<int> reported{0};
        const int n = reported.fetch_add(1);
        if (n < 3)
            std::cerr << "pcbeam: warning: " << sel.collisions
                      << " codeword collision(s) in beam sweep; proceeding without rescheduling\n";
        if (n == 3)
            std::cerr << "pcbeam: note: suppressing further codeword collision warnings\n";
    }
    return sel;
}

} // namespace pcbeam
