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

#ifndef chx_core_channel_matrix_H
#define chx_core_channel_matrix_H

#include <armadillo>
#include <cstdint>

#include "core/frequency_grid.hpp"

namespace chx
{

// Processing stage of a channel matrix. Raw is as-measured, Compensated has
// the calibration response divided out, Normalized is unit average sample
// power over the full band it was normalized on.
enum class Stage : std::uint8_t
{
    Raw = 0,
    Compensated = 1,
    Normalized = 2
};

// M x K complex transfer function bound to a frequency grid. Column k holds
// the M antenna samples at grid.frequency(k). Immutable by convention after
// construction; operations return new matrices.
struct ChannelMatrix
{
    arma::cx_mat data; // M x K
    FrequencyGrid grid;
    Stage stage = Stage::Raw;

    ChannelMatrix() = default;
    ChannelMatrix(arma::cx_mat samples, FrequencyGrid g, Stage s);

    std::size_t n_antennas() const { return data.n_rows; }
    std::size_t n_freq() const { return data.n_cols; }
};

// Back-to-back calibration response of the measurement chain, one complex
// value per frequency node.
struct RfResponse
{
    arma::cx_vec values;
    FrequencyGrid grid;
    double magnitude_floor = 1e-12;

    RfResponse() = default;
    RfResponse(arma::cx_vec v, FrequencyGrid g, double floor = 1e-12);
};

// Contiguous training sub-band, 1-based offset `a` and width `k_u` columns,
// i.e. columns a .. a+k_u-1 of the full matrix.
struct TrainingBand
{
    std::size_t a = 1;
    std::size_t k_u = 2;

    TrainingBand() = default;
    TrainingBand(std::size_t offset, std::size_t width);

    void validate_against(const FrequencyGrid &grid) const;

    // Band holding every grid node inside [center - width/2, center + width/2]
    // (half-open arithmetic guarded by a relative slack for representability).
    static TrainingBand from_center(const FrequencyGrid &grid, double center_hz, double width_hz);
};

// Divides column k of the measurement by rf.values[k]. Ungates the channel
// and antenna response from the sounder chain.
ChannelMatrix compensate_rf(const ChannelMatrix &h_meas, const RfResponse &rf);

// Scales by mu = sqrt(||h||_F^2 / (M*K)) so the result has unit average
// sample power. Returns the scaled matrix and mu.
struct NormalizeResult
{
    ChannelMatrix matrix;
    double mu = 0.0;
};
NormalizeResult normalize(const ChannelMatrix &h);

// Extracts the training-band columns. The slice keeps the parent's
// normalization constant and stage; no re-normalization.
ChannelMatrix select_training_band(const ChannelMatrix &h, const TrainingBand &band);

} // namespace chx

#endif
