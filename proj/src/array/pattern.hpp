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

#ifndef chx_array_pattern_H
#define chx_array_pattern_H

#include <complex>
#include <string>
#include <vector>

#include "array/geometry.hpp"
#include "core/frequency_grid.hpp"

namespace chx
{

// 4-D complex array response sampled over (azimuth, elevation, element,
// frequency). Stored flat with the element index fastest, so the M-vector
// at one (az, el, f) node is contiguous.
struct ArrayPattern
{
    arma::vec az_grid; // ascending, spans < 2 pi, no duplicate endpoint
    arma::vec el_grid; // ascending, inside (-pi/2, pi/2]
    FrequencyGrid freq_grid;
    std::size_t m_count = 0;
    std::vector<std::complex<double>> response;

    std::size_t n_az() const { return az_grid.n_elem; }
    std::size_t n_el() const { return el_grid.n_elem; }
    std::size_t n_freq() const { return freq_grid.count; }

    std::complex<double> *node(std::size_t i_az, std::size_t j_el, std::size_t k_f)
    {
        return response.data() + ((i_az * n_el() + j_el) * n_freq() + k_f) * m_count;
    }
    const std::complex<double> *node(std::size_t i_az, std::size_t j_el, std::size_t k_f) const
    {
        return response.data() + ((i_az * n_el() + j_el) * n_freq() + k_f) * m_count;
    }

    void validate() const;
};

// Samples steering_vector over the three grids. Parallel across azimuth
// rows; per-cell writes keep the result schedule-independent.
ArrayPattern synth_calibration(const ArrayGeometry &geom, const arma::vec &az_grid,
                               const arma::vec &el_grid, const FrequencyGrid &freq_grid);

// Trilinear interpolation over (az, el, f), real and imaginary parts
// independently. Azimuth wraps modulo 2 pi; elevation and frequency must be
// inside the calibration hull (1e-9 relative slack at the edges).
arma::cx_vec pattern_lookup(const ArrayPattern &pat, double phi, double theta, double f);
void pattern_lookup_into(const ArrayPattern &pat, double phi, double theta, double f,
                         std::complex<double> *out);

// One pose of a virtual array: element displacement and an azimuth rotation
// applied to the element pattern.
struct VirtualPose
{
    arma::vec3 position{arma::fill::zeros};
    double az_rotation = 0.0;
};

// Builds an M-element pattern from a single-element pattern by displacing
// (geometric phase) and rotating (azimuth shift of the lookup coordinate)
// the element once per pose.
ArrayPattern virtual_array_from_element(const ArrayPattern &element_pattern,
                                        const std::vector<VirtualPose> &poses);

// "CHP1" pattern container: magic "CHP1\0\0\0\0", u32 N_az, N_el, M, K_cal,
// f64 azimuth nodes, f64 elevation nodes, f64 f_start_Hz, f64 spacing_Hz,
// then complex f64 payload in (az, el, m, k) row-major order.
void save_pattern(const ArrayPattern &pat, const std::string &path);
ArrayPattern load_pattern(const std::string &path);

} // namespace chx

#endif
