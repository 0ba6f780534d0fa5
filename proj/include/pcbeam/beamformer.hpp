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

#include "channel.hpp"
#include "system.hpp"

namespace pcbeam {

// Phase-shifter beamformer of the partially-connected structure: one
// constant-modulus vector per subarray, assembling to a block-diagonal
// n_bs x k matrix whose column k is nonzero only on subarray k's antennas.
struct AnalogBeamformer
{
    std::vector<arma::cx_vec> subarray_vectors;

    arma::uword blocks() const { return subarray_vectors.size(); }
    arma::uword n_s() const { return subarray_vectors.empty() ? 0 : subarray_vectors.front().n_elem; }
    arma::uword n_bs() const { return blocks() * n_s(); }

    arma::cx_mat assemble() const
    {
        const arma::uword k = blocks();
        const arma::uword ns = n_s();
        arma::cx_mat f(n_bs(), k, arma::fill::zeros);
        for (arma::uword q = 0; q < k; ++q)
            f.submat(q * ns, q, (q + 1) * ns - 1, q) = subarray_vectors[q];
        return f;
    }

    // F^H h computed blockwise; entry q is f_q^H h restricted to subarray q.
    arma::cx_vec effective_channel(const arma::cx_vec& h) const
    {
        const arma::uword k = blocks();
        const arma::uword ns = n_s();
        if (h.n_elem != n_bs())
            throw std::invalid_argument("AnalogBeamformer: channel length does not match array size");
        arma::cx_vec eff(k);
        for (arma::uword q = 0; q < k; ++q)
            eff(q) = arma::cdot(subarray_vectors[q], h.subvec(q * ns, (q + 1) * ns - 1));
        return eff;
    }
};

// Baseband beamformer, k x k. Combined with an analog stage whose columns are
// orthonormal, the hybrid power constraint reduces to a Frobenius norm on it.
struct DigitalBeamformer
{
    arma::cx_mat matrix;
};

// Unconstrained n_bs x k beamformer used by the fully digital reference.
struct FullyDigitalBeamformer
{
    arma::cx_mat matrix;
};

// Largest deviation of any analog entry modulus from 1/sqrt(n_s).
inline double max_modulus_deviation(const AnalogBeamformer& analog)
{
    const double target = 1.0 / std::sqrt(static_cast<double>(analog.n_s()));
    double worst = 0.0;
    for (const auto& f : analog.subarray_vectors)
        for (const auto& v : f)
            worst = std::max(worst, std::abs(std::abs(v) - target));
    return worst;
}

inline double hybrid_power(const AnalogBeamformer& analog, const DigitalBeamformer& digital)
{
    const arma::cx_mat combined = analog.assemble() * digital.matrix;
    return arma::accu(arma::square(arma::abs(combined)));
}

inline bool check_constant_modulus(const AnalogBeamformer& analog, double tol = 1e-10)
{
    return max_modulus_deviation(analog) <= tol;
}

// Exact zeros outside the per-subarray blocks, nonzeros inside them.
inline bool check_block_support(const arma::cx_mat& dense, arma::uword n_s)
{
    if (n_s == 0 || dense.n_rows != n_s * dense.n_cols)
        return false;
    arma::uword nonzero = 0;
    for (arma::uword c = 0; c < dense.n_cols; ++c)
        for (arma::uword r = 0; r < dense.n_rows; ++r) {
            if (dense(r, c) != cxd{})
                ++nonzero;
            if (r / n_s != c && dense(r, c) != cxd{})
                return false;
        }
    return nonzero == dense.n_rows;
}

inline bool check_hybrid_power(const AnalogBeamformer& analog, const DigitalBeamformer& digital,
                               double budget, double tol = 1e-8)
{
    return std::abs(hybrid_power(analog, digital) - budget) <= tol;
}

} // namespace pcbeam
