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

#ifndef chx_array_geometry_H
#define chx_array_geometry_H

#include <armadillo>
#include <string>

namespace chx
{

constexpr double speed_of_light = 299792458.0; // m/s

enum class ElementModel
{
    Isotropic,
    CosinePower
};

// Physical element layout: positions in meters, per-element boresight as
// (azimuth, elevation) in radians, and a scalar gain model shared by all
// elements.
struct ArrayGeometry
{
    arma::mat positions;    // M x 3
    arma::mat orientations; // M x 2 (boresight az, el)
    ElementModel model = ElementModel::Isotropic;
    double cos_exponent = 0.0;

    std::size_t n_elements() const { return positions.n_rows; }

    void validate() const;
};

// Unit vector pointing from the array toward a source at azimuth phi,
// elevation theta. The propagation direction of the incoming wave is its
// negation.
arma::vec3 direction_to_source(double phi, double theta);

// Plane-wave array response: entry m is
//   g_m(phi, theta) * exp(-j 2 pi f <u, p_m> / c)
// with u the unit propagation direction (source toward array), p_m the
// element position and g_m the element gain (1 for Isotropic,
// max(0, cos angle-to-boresight)^exponent for CosinePower).
arma::cx_vec steering_vector(const ArrayGeometry &geom, double phi, double theta, double f);

// Presets mirroring the hardware shapes used for evaluation: a cylinder of
// vertical columns, a uniform linear array along x, and a uniform ring.
// Spacing defaults to half a wavelength at 3.5 GHz.
ArrayGeometry make_cylinder_array(std::size_t n_cols, std::size_t n_rows, double spacing_m,
                                  ElementModel model, double cos_exponent);
ArrayGeometry make_linear_array(std::size_t m, double spacing_m);
ArrayGeometry make_ring_array(std::size_t m, double spacing_m);
ArrayGeometry make_single_element();

// Named presets used by configs: "cylinder64", "linear<M>", "ring<M>",
// "single". Throws config_invalid for unknown names.
ArrayGeometry geometry_preset(const std::string &name);

} // namespace chx

#endif
