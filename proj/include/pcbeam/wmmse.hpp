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

#include "metrics.hpp"
#include "system.hpp"

// Weighted-MMSE alternating optimization for sum-rate maximization under a
// total-power constraint. The solver works on an arbitrary d x K channel
// matrix (column k = channel seen by user k), so the same machinery serves
// both the effective channels of the hybrid scheme and, after an orthonormal
// basis reduction, the raw channels of the fully digital reference.
//
// Two update rules are provided:
//  - paper_literal reproduces the receiver and precoder update formulas of
//    the source description verbatim (receiver numerator unconjugated, no
//    per-stream power scaling, interference-only denominator).
//  - derived_optimal uses the exact per-block minimizers of the weighted-MSE
//    objective sum_k (w_k e_k - log2 w_k): the MMSE receiver with the P/K
//    scaling and full denominator, the weight w_k = 1/(e_k ln 2) that is
//    stationary for the log2 objective, and the conjugated precoder
//    coefficient. Every step then provably decreases the objective, which is
//    the variant's point; it is the default.

namespace pcbeam {

enum class WmmseVariant
{
    derived_optimal,
    paper_literal,
};

struct WmmseOptions
{
    unsigned max_iters = 20;
    double rel_tol = 1e-4;
    WmmseVariant variant = WmmseVariant::derived_optimal;
};

struct WmmseState
{
    arma::cx_vec receivers;              // u_k
    arma::vec weights;                   // w_k
    arma::vec errors;                    // e_k at the last weight update
    double multiplier = 0.0;             // power Lagrange multiplier of the last precoder update
    std::vector<double> objective_trace; // sum_k (w_k e_k - log2 w_k) after each iteration
    std::vector<double> sum_rate_trace;  // bits/s/Hz after each iteration
    unsigned iterations = 0;
};

struct WmmseResult
{
    arma::cx_mat precoder; // d x K, Frobenius power = K at output
    WmmseState state;
};

namespace detail {

// gains(k, i) = g_k^H f_i
inline arma::cx_mat channel_gains(const arma::cx_mat& channels, const arma::cx_mat& precoder)
{
    return channels.t() * precoder;
}

} // namespace detail

inline double wmmse_mse(cxd receiver, const arma::cx_vec& channel_k, const arma::cx_mat& precoder,
                        arma::uword k, double total_power, double noise_var)
{
    const double stream_power = total_power / static_cast<double>(precoder.n_cols);
    const arma::cx_rowvec gains = channel_k.t() * precoder;
    double e = stream_power * std::norm(1.0 - receiver * gains(k));
    for (arma::uword i = 0; i < precoder.n_cols; ++i)
        if (i != k)
            e += stream_power * std::norm(receiver * gains(i));
    e += noise_var * std::norm(receiver);
    return e;
}

inline arma::cx_vec wmmse_update_receivers(const arma::cx_mat& channels, const arma::cx_mat& precoder,
                                           double total_power, double noise_var, WmmseVariant variant)
{
    const arma::uword k_users = channels.n_cols;
    const double stream_power = total_power / static_cast<double>(k_users);
    const arma::cx_mat gains = detail::channel_gains(channels, precoder);
    arma::cx_vec receivers(k_users);
    for (arma::uword k = 0; k < k_users; ++k) {
        const cxd desired = gains(k, k);
        double total = 0.0;
        for (arma::uword i = 0; i < k_users; ++i)
            total += std::norm(gains(k, i));
        if (variant == WmmseVariant::derived_optimal) {
            receivers(k) = stream_power * std::conj(desired) / (stream_power * total + noise_var);
        } else {
            const double interference = total - std::norm(desired);
            receivers(k) = desired / (interference + noise_var);
        }
    }
    return receivers;
}

inline arma::vec wmmse_update_weights(const arma::vec& errors, WmmseVariant variant)
{
    for (double e : errors)
        if (!(e > 0.0))
            throw std::runtime_error("wmmse_update_weights: nonpositive MSE");
    if (variant == WmmseVariant::derived_optimal)
        return 1.0 / (errors * std::log(2.0));
    return 1.0 / errors;
}

struct PrecoderUpdate
{
    arma::cx_mat precoder;
    double multiplier = 0.0;
};

// Precoder block update: column k solves the weighted-MSE stationarity system
// (sum_i w_i |u_i|^2 g_i g_i^H + mu I) f_k = coeff_k g_k, with mu >= 0 found
// by bisection on the monotone power curve so that the Frobenius power meets
// the budget; mu = 0 is kept when the unconstrained solution is already
// inside the budget.
inline PrecoderUpdate wmmse_update_precoder(const arma::cx_mat& channels, const arma::cx_vec& receivers,
                                            const arma::vec& weights, double power_budget,
                                            WmmseVariant variant)
{
    const arma::uword d = channels.n_rows;
    const arma::uword k_users = channels.n_cols;

    arma::cx_vec coeff(k_users);
    arma::vec quad(k_users);
    for (arma::uword k = 0; k < k_users; ++k) {
        const cxd u = receivers(k);
        coeff(k) = weights(k) * (variant == WmmseVariant::derived_optimal ? std::conj(u) : u);
        quad(k) = weights(k) * std::norm(u);
    }

    PrecoderUpdate out;
    if (arma::norm(coeff, "inf") == 0.0) {
        out.precoder = arma::cx_mat(d, k_users, arma::fill::zeros);
        return out;
    }

    arma::cx_mat gram = channels * arma::diagmat(arma::cx_vec(quad, arma::vec(k_users, arma::fill::zeros))) *
                        channels.t();
    gram = 0.5 * (gram + gram.t());

    arma::vec eigval;
    arma::cx_mat eigvec;
    if (!arma::eig_sym(eigval, eigvec, gram))
        throw std::runtime_error("wmmse_update_precoder: eigendecomposition failed");
    eigval.transform([](double v) { return std::max(v, 0.0); });

    const arma::cx_mat basis_channels = eigvec.t() * channels; // (j, k) = v_j^H g_k

    const auto power_at = [&](double mu) {
        double p = 0.0;
        for (arma::uword k = 0; k < k_users; ++k) {
            const double c2 = std::norm(coeff(k));
            for (arma::uword j = 0; j < d; ++j) {
                const double den = eigval(j) + mu;
                p += c2 * std::norm(basis_channels(j, k)) / (den * den);
            }
        }
        return p;
    };

    double mu = 0.0;
    const double eig_floor = 1e-13 * std::max(1.0, eigval.max());
    const bool invertible = eigval.min() > eig_floor;
    if (!(invertible && power_at(0.0) <= power_budget)) {
        double hi = std::max(eigval.max(), 1.0) * 1e-8;
        while (power_at(hi) > power_budget)
            hi *= 2.0;
        double lo = 0.0;
        for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (power_at(mid) > power_budget ? lo : hi) = mid;
        }
        mu = hi; // feasible side: power(mu) <= budget
    }

    out.multiplier = mu;
    out.precoder.set_size(d, k_users);
    for (arma::uword k = 0; k < k_users; ++k) {
        arma::cx_vec scaled = basis_channels.col(k);
        for (arma::uword j = 0; j < d; ++j)
            scaled(j) /= (eigval(j) + mu);
        out.precoder.col(k) = coeff(k) * (eigvec * scaled);
    }
    return out;
}

inline double wmmse_objective(const arma::vec& weights, const arma::vec& errors)
{
    double obj = 0.0;
    for (arma::uword k = 0; k < weights.n_elem; ++k)
        obj += weights(k) * errors(k) - std::log2(weights(k));
    return obj;
}

inline WmmseResult wmmse_solve(const arma::cx_mat& channels, double total_power, double noise_var,
                               const WmmseOptions& opts = {})
{
    if (opts.max_iters == 0 || !(opts.rel_tol > 0.0))
        throw std::invalid_argument("wmmse_solve: max_iters >= 1 and rel_tol > 0 required");
    const arma::uword k_users = channels.n_cols;
    const double stream_power = total_power / static_cast<double>(k_users);
    const double power_budget = static_cast<double>(k_users);

    // Matched-channel initialization with unit-norm columns.
    arma::cx_mat precoder = channels;
    for (arma::uword k = 0; k < k_users; ++k) {
        const double n = arma::norm(precoder.col(k));
        if (!(n > 0.0))
            throw std::runtime_error("wmmse_solve: zero channel column");
        precoder.col(k) /= n;
    }

    WmmseResult result;
    WmmseState& state = result.state;
    double prev_obj = 0.0;

    for (unsigned it = 1; it <= opts.max_iters; ++it) {
        state.receivers = wmmse_update_receivers(channels, precoder, total_power, noise_var, opts.variant);

        arma::cx_mat gains = detail::channel_gains(channels, precoder);
        arma::vec errors(k_users);
        for (arma::uword k = 0; k < k_users; ++k) {
            const cxd u = state.receivers(k);
            double e = stream_power * std::norm(1.0 - u * gains(k, k));
            for (arma::uword i = 0; i < k_users; ++i)
                if (i != k)
                    e += stream_power * std::norm(u * gains(k, i));
            e += noise_var * std::norm(u);
            errors(k) = e;
        }
        state.errors = errors;
        state.weights = wmmse_update_weights(errors, opts.variant);

        PrecoderUpdate upd =
            wmmse_update_precoder(channels, state.receivers, state.weights, power_budget, opts.variant);
        precoder = upd.precoder;
        state.multiplier = upd.multiplier;

        // Objective and rate at the full updated block (u, w, F).
        gains = detail::channel_gains(channels, precoder);
        arma::vec post_errors(k_users);
        for (arma::uword k = 0; k < k_users; ++k) {
            const cxd u = state.receivers(k);
            double e = stream_power * std::norm(1.0 - u * gains(k, k));
            for (arma::uword i = 0; i < k_users; ++i)
                if (i != k)
                    e += stream_power * std::norm(u * gains(k, i));
            e += noise_var * std::norm(u);
            post_errors(k) = e;
        }
        const double obj = wmmse_objective(state.weights, post_errors);
        state.objective_trace.push_back(obj);
        state.sum_rate_trace.push_back(arma::accu(per_user_rates_from_gains(gains, total_power, noise_var)));
        state.iterations = it;

        if (it > 1 && std::abs(obj - prev_obj) <= opts.rel_tol * (std::abs(prev_obj) + 1e-12))
            break;
        prev_obj = obj;
    }

    // Exact power at output.
    const double power = arma::accu(arma::square(arma::abs(precoder)));
    if (power > 0.0)
        precoder *= std::sqrt(power_budget / power);
    result.precoder = precoder;
    return result;
}

} // namespace pcbeam
