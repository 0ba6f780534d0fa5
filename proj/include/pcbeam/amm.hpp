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

#include "amm_types.hpp"
#include "array.hpp"
#include "beamformer.hpp"
#include "codebook.hpp"
#include "system.hpp"

// Analog-only multiuser beamforming from swept angular sectors. Each user's
// beam maximizes sampled power in its own sector while nulling the sectors of
// the other users (leakage weighted by lambda), subject to the constant
// modulus constraint of the phase shifters. The nonconvex subproblems are
// solved by majorization-minimization with a closed-form phase update, so the
// sampled leakage objective decreases monotonically. No digital stage is
// involved: the baseband beamformer stays the identity.

namespace pcbeam {

namespace detail {

// Columns are the sampled steering slices a(phi_(k,m)) restricted to
// subarray q, for one source sector k.
inline arma::cx_mat sampled_slices(const AngleRange& range, arma::uword subarray, const SystemConfig& cfg,
                                   unsigned m_samples)
{
    const std::vector<double> phis = sample_angle_range(range, m_samples);
    arma::cx_mat slices(cfg.n_s(), phis.size());
    for (arma::uword m = 0; m < phis.size(); ++m)
        slices.col(m) = subarray_steering(wrap_aod_sine(phis[m]), subarray, cfg);
    return slices;
}

// Interference slices for user q: samples of every other user's sector seen
// through subarray q, concatenated.
inline arma::cx_mat interference_slices(arma::uword q, const std::vector<AngleRange>& ranges,
                                        const SystemConfig& cfg, unsigned m_samples)
{
    const arma::uword ns = cfg.n_s();
    arma::cx_mat slices(ns, (ranges.size() - 1) * m_samples);
    arma::uword col = 0;
    for (arma::uword k = 0; k < ranges.size(); ++k) {
        if (k == q)
            continue;
        slices.cols(col, col + m_samples - 1) = sampled_slices(ranges[k], q, cfg, m_samples);
        col += m_samples;
    }
    return slices;
}

} // namespace detail

// Sampled leakage objective for user q's beam: negative desired-sector power
// plus lambda times the power leaked into the other users' sectors. The
// additive lambda*M*noise term is constant in the beam and omitted.
inline double slnr_objective(const arma::cx_vec& beam, arma::uword q, const std::vector<AngleRange>& ranges,
                             const SystemConfig& cfg, const AmmConfig& amm_cfg)
{
    const arma::cx_mat desired = detail::sampled_slices(ranges[q], q, cfg, amm_cfg.samples_per_range);
    const arma::cx_mat leak = detail::interference_slices(q, ranges, cfg, amm_cfg.samples_per_range);
    const double desired_power = arma::accu(arma::square(arma::abs(desired.t() * beam)));
    const double leaked_power = arma::accu(arma::square(arma::abs(leak.t() * beam)));
    return -desired_power + amm_cfg.lambda * leaked_power;
}

// Linear surrogate coefficients at the expansion point f: the desired term
// collects the sector projectors applied to f, the leakage term collects
// (projector - identity) applied to f for every interfering sample.
struct SurrogateCoeffs
{
    arma::cx_vec desired;
    arma::cx_vec leakage;
};

inline SurrogateCoeffs mm_surrogate_coeffs(const arma::cx_vec& expansion, arma::uword q,
                                           const std::vector<AngleRange>& ranges, const SystemConfig& cfg,
                                           const AmmConfig& amm_cfg)
{
    const arma::cx_mat desired = detail::sampled_slices(ranges[q], q, cfg, amm_cfg.samples_per_range);
    const arma::cx_mat leak = detail::interference_slices(q, ranges, cfg, amm_cfg.samples_per_range);
    SurrogateCoeffs coeffs;
    coeffs.desired = desired * (desired.t() * expansion);
    coeffs.leakage = leak * (leak.t() * expansion) -
                     static_cast<double>(leak.n_cols) * expansion;
    return coeffs;
}

// Minimizer of Re{f^H (lambda*leakage - desired)} over the constant-modulus
// set: each entry takes the phase of (desired - lambda*leakage). Zero
// coefficients map to phase 0.
inline arma::cx_vec mm_closed_form_update(const arma::cx_vec& desired, const arma::cx_vec& leakage,
                                          double lambda, arma::uword n_s)
{
    const double modulus = 1.0 / std::sqrt(static_cast<double>(n_s));
    const arma::cx_vec direction = desired - lambda * leakage;
    arma::cx_vec beam(n_s);
    for (arma::uword n = 0; n < n_s; ++n)
        beam(n) = std::polar(modulus, direction(n) == cxd{} ? 0.0 : std::arg(direction(n)));
    return beam;
}

struct AmmUserTrace
{
    double initial_objective = 0.0;
    std::vector<double> objective; // value after each update
    unsigned iterations = 0;
};

struct AmmResult
{
    AnalogBeamformer analog;
    std::vector<AmmUserTrace> traces;
};

// Independent per-user beam nulling. Each subproblem starts from the swept
// codeword and iterates the closed-form majorization update until the sampled
// objective stalls or the iteration cap is hit.
inline AmmResult run_amm(const std::vector<arma::cx_vec>& init_codewords,
                         const std::vector<AngleRange>& ranges, const SystemConfig& cfg,
                         const AmmConfig& amm_cfg)
{
    cfg.validate();
    amm_cfg.validate();
    if (init_codewords.size() != cfg.k_users || ranges.size() != cfg.k_users)
        throw std::invalid_argument("run_amm: need one codeword and one angle range per user");
    for (const auto& r : ranges)
        r.validate();

    const arma::uword ns = cfg.n_s();
    const double lambda = amm_cfg.lambda;

    AmmResult result;
    result.analog.subarray_vectors.resize(cfg.k_users);
    result.traces.resize(cfg.k_users);

    for (arma::uword q = 0; q < cfg.k_users; ++q) {
        if (init_codewords[q].n_elem != ns)
            throw std::invalid_argument("run_amm: codeword length mismatch");
        const arma::cx_mat desired = detail::sampled_slices(ranges[q], q, cfg, amm_cfg.samples_per_range);
        const arma::cx_mat leak = detail::interference_slices(q, ranges, cfg, amm_cfg.samples_per_range);
        const double n_leak = static_cast<double>(leak.n_cols);

        arma::cx_vec beam = init_codewords[q];
        arma::cx_vec dp = desired.t() * beam; // desired-sector responses
        arma::cx_vec lp = leak.t() * beam;    // leakage responses
        double objective = -arma::accu(arma::square(arma::abs(dp))) +
                           lambda * arma::accu(arma::square(arma::abs(lp)));

        AmmUserTrace& trace = result.traces[q];
        trace.initial_objective = objective;

        for (unsigned it = 1; it <= amm_cfg.max_iters; ++it) {
            const arma::cx_vec direction = desired * dp - lambda * (leak * lp - n_leak * beam);
            if (arma::norm(direction, "inf") == 0.0)
                break; // flat surrogate: keep the current beam
            arma::cx_vec next(ns);
            const double modulus = 1.0 / std::sqrt(static_cast<double>(ns));
            for (arma::uword n = 0; n < ns; ++n)
                next(n) = std::polar(modulus, direction(n) == cxd{} ? 0.0 : std::arg(direction(n)));
            beam = std::move(next);

            dp = desired.t() * beam;
            lp = leak.t() * beam;
            const double prev = objective;
            objective = -arma::accu(arma::square(arma::abs(dp))) +
                        lambda * arma::accu(arma::square(arma::abs(lp)));
            trace.objective.push_back(objective);
            trace.iterations = it;
            if (std::abs(objective - prev) <= amm_cfg.rel_tol * (std::abs(prev) + 1e-12))
                break;
        }
        result.analog.subarray_vectors[q] = std::move(beam);
    }
    return result;
}

// Convenience composition: sweep, then null, on the swept sectors. The sweep
// noise draws from stream 1 of the trial seed, the same stream the
// zero-forcing baseline sweeps with, so paired trials select identically.
inline AmmResult run_amm_from_sweep(const std::vector<ChannelRealization>& channels, const Codebook& codebook,
                                    const SystemConfig& cfg, const AmmConfig& amm_cfg,
                                    double sweep_snr_linear, std::uint64_t seed)
{
    const SweepSelection sel = beam_sweep(channels, codebook, cfg, sweep_snr_linear, seed_stream(seed, 1));
    return run_amm(sel.codewords, sel.ranges, cfg, amm_cfg);
}

} // namespace pcbeam
