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

#include "system.hpp"

namespace pcbeam {

// Closed AoD sine interval. Sine -1 aliases +1 on a half-wavelength ULA, so
// lo = -1 is tolerated for the lowest codebook cell.
struct AngleRange
{
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }

    void validate() const
    {
        if (!(lo < hi) || !(lo >= -1.0) || !(hi <= 1.0))
            throw std::invalid_argument("AngleRange: need -1 <= lo < hi <= 1");
    }
};

inline AngleRange angle_range_from_degrees(double lo_deg, double hi_deg)
{
    AngleRange r{deg_to_sine(lo_deg), deg_to_sine(hi_deg)};
    r.validate();
    return r;
}

// Maps the closed lower edge -1 onto its alias +1 so sampled sector points
// always land in the steering domain (-1, 1].
inline double wrap_aod_sine(double phi) { return phi <= -1.0 ? phi + 2.0 : phi; }

// Uniformly spaced sample points covering [lo, hi], endpoints included.
// A single sample collapses to the midpoint.
inline std::vector<double> sample_angle_range(const AngleRange& range, unsigned m_samples)
{
    if (m_samples == 0)
        throw std::invalid_argument("sample_angle_range: need at least one sample");
    std::vector<double> points;
    points.reserve(m_samples);
    if (m_samples == 1) {
        points.push_back(range.mid());
        return points;
    }
    const double step = range.width() / static_cast<double>(m_samples - 1);
    for (unsigned i = 0; i < m_samples; ++i)
        points.push_back(range.lo + step * static_cast<double>(i));
    return points;
}

// Tuning of the analog-only beam-nulling solver.
struct AmmConfig
{
    double lambda = 1000.0;           // leakage weight
    unsigned samples_per_range = 10;  // sample points per angular sector
    unsigned max_iters = 50;
    double rel_tol = 1e-6;

    void validate() const
    {
        if (!(lambda > 0.0))
            throw std::invalid_argument("AmmConfig: lambda must be positive");
        if (samples_per_range == 0)
            throw std::invalid_argument("AmmConfig: samples_per_range must be at least 1");
        if (max_iters == 0)
            throw std::invalid_argument("AmmConfig: max_iters must be at least 1");
        if (!(rel_tol > 0.0))
            throw std::invalid_argument("AmmConfig: rel_tol must be positive");
    }
};

} // namespace pcbeam
