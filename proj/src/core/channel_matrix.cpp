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

#include "core/channel_matrix.hpp"

#include <cmath>

namespace chx
{

ChannelMatrix::ChannelMatrix(arma::cx_mat samples, FrequencyGrid g, Stage s)
    : data(std::move(samples)), grid(g), stage(s)
{
    if (data.n_cols != grid.count)
        raise(errc::dimension_mismatch, "channel column count does not match frequency grid");
    if (data.n_rows < 1)
        raise(errc::dimension_mismatch, "channel needs at least one antenna row");
}

RfResponse::RfResponse(arma::cx_vec v, FrequencyGrid g, double floor)
    : values(std::move(v)), grid(g), magnitude_floor(floor)
{
    if (values.n_elem != grid.count)
        raise(errc::dimension_mismatch, "calibration response length does not match grid");
}

TrainingBand::TrainingBand(std::size_t offset, std::size_t width) : a(offset), k_u(width)
{
    if (a < 1)
        raise(errc::band_out_of_range, "band offset is 1-based and must be >= 1");
    if (k_u < 2)
        raise(errc::band_out_of_range, "band width must be at least 2 columns");
}

void TrainingBand::validate_against(const FrequencyGrid &grid) const
{
    if (a < 1 || k_u < 2 || a + k_u - 1 > grid.count)
        raise(errc::band_out_of_range, "training band exceeds the frequency grid");
}

TrainingBand TrainingBand::from_center(const FrequencyGrid &grid, double center_hz, double width_hz)
{
    if (!(width_hz > 0.0) || !std::isfinite(center_hz))
        raise(errc::band_out_of_range, "band center/width must be finite, width positive");

    // Relative slack absorbs last-ulp error when band edges are themselves
    // derived from grid arithmetic (e.g. center = f(k) +/- n*spacing).
    double slack = 1e-9;
    double lo = (center_hz - 0.5 * width_hz - grid.f_start) / grid.spacing;
    double hi = (center_hz + 0.5 * width_hz - grid.f_start) / grid.spacing;
    long k_lo = (long)std::ceil(lo - slack);
    long k_hi = (long)std::floor(hi + slack);

    if (k_lo < 0)
        k_lo = 0;
    if (k_hi > long(grid.count) - 1)
        k_hi = long(grid.count) - 1;
    if (k_hi < k_lo + 1)
        raise(errc::band_out_of_range, "requested band covers fewer than two grid nodes");

    return TrainingBand(std::size_t(k_lo) + 1, std::size_t(k_hi - k_lo) + 1);
}

ChannelMatrix compensate_rf(const ChannelMatrix &h_meas, const RfResponse &rf)
{
    if (!(h_meas.grid == rf.grid))
        raise(errc::grid_mismatch, "channel and calibration response grids differ");

    for (std::size_t k = 0; k < rf.values.n_elem; ++k)
        if (std::abs(rf.values[k]) < rf.magnitude_floor)
            raise(errc::division_guard, "calibration response magnitude below floor at node " +
                                             std::to_string(k));

    arma::cx_mat out(h_meas.data.n_rows, h_meas.data.n_cols);
    for (std::size_t k = 0; k < h_meas.data.n_cols; ++k)
        out.col(k) = h_meas.data.col(k) / rf.values[k];

    return ChannelMatrix(std::move(out), h_meas.grid, Stage::Compensated);
}

NormalizeResult normalize(const ChannelMatrix &h)
{
    double energy = 0.0;
    for (const auto &v : h.data)
        energy += std::norm(v);
    if (energy == 0.0)
        raise(errc::zero_matrix, "cannot normalize an all-zero channel");

    double mu = std::sqrt(energy / double(h.data.n_elem));
    ChannelMatrix out(h.data / mu, h.grid, Stage::Normalized);
    return {std::move(out), mu};
}

ChannelMatrix select_training_band(const ChannelMatrix &h, const TrainingBand &band)
{
    band.validate_against(h.grid);

    std::size_t first = band.a - 1;
    FrequencyGrid sub(h.grid.frequency(first), h.grid.spacing, band.k_u);
    arma::cx_mat cols = h.data.cols(first, first + band.k_u - 1);
    return ChannelMatrix(std::move(cols), sub, h.stage);
}

} // namespace chx
