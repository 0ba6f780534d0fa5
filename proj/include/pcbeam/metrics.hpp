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
#include <vector>

#include "amm_types.hpp"
#include "array.hpp"
#include "beamformer.hpp"
#include "channel.hpp"
#include "system.hpp"

namespace pcbeam {

struct RateReport
{
    arma::vec per_user; // bits/s/Hz
    double sum = 0.0;
};

// Per-user achievable rates from the gain matrix gains(k, i) = h_k^H w_i,
// with per-stream power P/K and conjugate-transpose channel convention.
inline arma::vec per_user_rates_from_gains(const arma::cx_mat& gains, double total_power, double noise_var)
{
    const arma::uword k_users = gains.n_rows;
    const double stream_power = total_power / static_cast<double>(gains.n_cols);
    arma::vec rates(k_users);
    for (arma::uword k = 0; k < k_users; ++k) {
        double desired = std::norm(gains(k, k));
        double interference = 0.0;
        for (arma::uword i = 0; i < gains.n_cols; ++i)
            if (i != k)
                interference += std::norm(gains(k, i));
        const double sinr = stream_power * desired / (stream_power * interference + noise_var);
        rates(k) = std::log2(1.0 + sinr);
    }
    return rates;
}

// Sum rate of a combined (analog x digital or fully digital) beamformer,
// evaluated directly on the full channel vectors.
inline RateReport sum_rate(const std::vector<ChannelRealization>& channels, const arma::cx_mat& combined,
                           const SystemConfig& cfg)
{
    if (channels.size() != cfg.k_users || combined.n_cols != cfg.k_users || combined.n_rows != cfg.n_bs)
        throw std::invalid_argument("sum_rate: dimension mismatch");

    const double power = arma::accu(arma::square(arma::abs(combined)));
    if (std::abs(power - static_cast<double>(cfg.k_users)) > 1e-6)
        std::cerr << "pcbeam: warning: beamformer power " << power << " deviates from budget "
                  << cfg.k_users << "\n";

    arma::cx_mat gains(cfg.k_users, cfg.k_users);
    for (arma::uword k = 0; k < cfg.k_users; ++k)
        for (arma::uword i = 0; i < cfg.k_users; ++i)
            gains(k, i) = arma::cdot(channels[k].vector, combined.col(i));

    RateReport report;
    report.per_user = per_user_rates_from_gains(gains, cfg.total_power, cfg.noise_var);
    report.sum = arma::accu(report.per_user);
    return report;
}

inline RateReport sum_rate(const std::vector<ChannelRealization>& channels, const AnalogBeamformer& analog,
                           const DigitalBeamformer& digital, const SystemConfig& cfg)
{
    return sum_rate(channels, arma::cx_mat(analog.assemble() * digital.matrix), cfg);
}

// Sampled SINR approximation of an analog-only beamformer for user q: mean
// desired-sector power over interference sampled at user q's own angles
// through the other subarrays, with per-stream power P/K on both.
inline double approx_sinr(arma::uword q, const AnalogBeamformer& analog, const std::vector<AngleRange>& ranges,
                          const SystemConfig& cfg, const AmmConfig& amm_cfg)
{
    if (q >= cfg.k_users || ranges.size() != cfg.k_users)
        throw std::invalid_argument("approx_sinr: bad user index or range count");
    const unsigned m = amm_cfg.samples_per_range;
    const double inv_m = 1.0 / static_cast<double>(m);
    const double stream_power = cfg.total_power / static_cast<double>(cfg.k_users);

    std::vector<double> own_angles = sample_angle_range(ranges[q], m);
    for (double& phi : own_angles)
        phi = wrap_aod_sine(phi);
    double desired = 0.0;
    for (double phi : own_angles)
        desired += std::norm(arma::cdot(subarray_steering(phi, q, cfg), analog.subarray_vectors[q]));

    double interference = 0.0;
    for (arma::uword k = 0; k < cfg.k_users; ++k) {
        if (k == q)
            continue;
        for (double phi : own_angles)
            interference += std::norm(arma::cdot(subarray_steering(phi, k, cfg), analog.subarray_vectors[k]));
    }
    return stream_power * inv_m * desired / (stream_power * inv_m * interference + cfg.noise_var);
}

// Peak-normalized power pattern of one subarray beam over an AoD sine grid.
// The probe vector is the unit-norm subarray-local steering vector.
struct BeamPattern
{
    arma::vec angles;   // AoD sines
    arma::vec gains_db; // peak-normalized, max entry exactly 0
    arma::uword user_index = 0;
};

inline double pattern_gain_linear(const arma::cx_vec& beam, double aod_sine)
{
    return std::norm(arma::cdot(steering_vector(aod_sine, beam.n_elem), beam));
}

inline BeamPattern beam_pattern(const arma::cx_vec& beam, arma::uword grid_size, arma::uword user_index = 0)
{
    if (grid_size < 2)
        throw std::invalid_argument("beam_pattern: grid must have at least 2 points");
    BeamPattern pattern;
    pattern.user_index = user_index;
    pattern.angles = arma::linspace(-1.0, 1.0, grid_size);
    // linspace includes -1, which aliases +1 on a half-wavelength ULA; nudge it
    // into the valid (-1, 1] domain without moving the grid point.
    arma::vec gains(grid_size);
    for (arma::uword i = 0; i < grid_size; ++i) {
        double phi = pattern.angles(i);
        if (phi <= -1.0)
            phi = 1.0;
        gains(i) = pattern_gain_linear(beam, phi);
    }
    const double peak = gains.max();
    if (!(peak > 0.0))
        throw std::runtime_error("beam_pattern: degenerate all-zero pattern");
    pattern.gains_db = 10.0 * arma::log10(gains / peak);
    return pattern;
}

inline double pattern_peak_gain(const arma::cx_vec& beam, arma::uword grid_size = 4096)
{
    const arma::vec grid = arma::linspace(-1.0, 1.0, grid_size);
    double peak = 0.0;
    for (arma::uword i = 0; i < grid_size; ++i) {
        double phi = grid(i);
        if (phi <= -1.0)
            phi = 1.0;
        peak = std::max(peak, pattern_gain_linear(beam, phi));
    }
    return peak;
}

inline double max_gain_in_range(const arma::cx_vec& beam, const AngleRange& range, unsigned n_samples = 256)
{
    double worst = 0.0;
    for (double phi : sample_angle_range(range, n_samples))
        worst = std::max(worst, pattern_gain_linear(beam, wrap_aod_sine(phi)));
    return worst;
}

// Peak-normalized worst-case gain (dB) of a beam inside a forbidden sector.
inline double nulling_depth_db(const arma::cx_vec& beam, const AngleRange& range, unsigned n_samples = 256,
                               arma::uword peak_grid = 4096)
{
    return 10.0 * std::log10(max_gain_in_range(beam, range, n_samples) / pattern_peak_gain(beam, peak_grid));
}

} // namespace pcbeam
