// SPDX-License-Identifier: Apache-2.0
//
// chx - multipath parameter estimation and channel extrapolation toolkit
// Copyright (C) 2026 chx developers
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

#ifndef chx_core_frequency_grid_H
#define chx_core_frequency_grid_H

#include <cmath>
#include <cstddef>

#include "common/error.hpp"

namespace chx
{

// Uniformly spaced frequency axis. Shared by channel matrices, calibration
// patterns and reconstruction targets. Node frequencies are computed as
// f_start + k*spacing directly (never by accumulation), so grids built from
// the same parameters agree bit-for-bit.
//
// A single-node grid (count == 1) is allowed; it backs degenerate
// calibration grids. Consumers that need at least two nodes (training
// bands, estimators) enforce that at their own boundary.
struct FrequencyGrid
{
    double f_start = 0.0; // Hz
    double spacing = 0.0; // Hz
    std::size_t count = 0;

    FrequencyGrid() = default;

    FrequencyGrid(double f_start_hz, double spacing_hz, std::size_t n)
        : f_start(f_start_hz), spacing(spacing_hz), count(n)
    {
        if (!std::isfinite(f_start) || !std::isfinite(spacing))
            raise(errc::grid_invalid, "frequency grid parameters must be finite");
        if (spacing <= 0.0)
            raise(errc::grid_invalid, "frequency spacing must be positive");
        if (count < 1)
            raise(errc::grid_invalid, "frequency grid needs at least one node");
    }

    double frequency(std::size_t k) const
    {
        if (k >= count)
            raise(errc::index_out_of_range, "frequency index exceeds grid");
        return f_start + double(k) * spacing;
    }

    double f_end() const { return frequency(count - 1); }

    bool operator==(const FrequencyGrid &other) const
    {
        return f_start == other.f_start && spacing == other.spacing && count == other.count;
    }
};

} // namespace chx

#endif
