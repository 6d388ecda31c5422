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

#include "array/geometry.hpp"

#include <cmath>

#include "common/error.hpp"

namespace chx
{

static constexpr double pi = 3.14159265358979323846;
static constexpr double default_spacing = 0.5 * speed_of_light / 3.5e9; // lambda/2 at 3.5 GHz

void ArrayGeometry::validate() const
{
    if (positions.n_rows < 1 || positions.n_cols != 3)
        raise(errc::dimension_mismatch, "element positions must be M x 3 with M >= 1");
    if (orientations.n_rows != positions.n_rows || orientations.n_cols != 2)
        raise(errc::dimension_mismatch, "element orientations must be M x 2");
    if (!positions.is_finite() || !orientations.is_finite())
        raise(errc::grid_invalid, "geometry entries must be finite");
    if (model == ElementModel::CosinePower && (!std::isfinite(cos_exponent) || cos_exponent < 0.0))
        raise(errc::grid_invalid, "cosine exponent must be finite and >= 0");
}

arma::vec3 direction_to_source(double phi, double theta)
{
    double ct = std::cos(theta);
    return {ct * std::cos(phi), ct * std::sin(phi), std::sin(theta)};
}

arma::cx_vec steering_vector(const ArrayGeometry &geom, double phi, double theta, double f)
{
    if (!(f > 0.0))
        raise(errc::grid_invalid, "steering frequency must be positive");

    arma::vec3 to_source = direction_to_source(phi, theta);
    double wavenumber = 2.0 * pi * f / speed_of_light;

    std::size_t m_count = geom.n_elements();
    arma::cx_vec s(m_count);
    for (std::size_t m = 0; m < m_count; ++m)
    {
        // u = -to_source, so -<u, p> = +<to_source, p>.
        double proj = to_source[0] * geom.positions(m, 0) + to_source[1] * geom.positions(m, 1) +
                      to_source[2] * geom.positions(m, 2);
        double phase = wavenumber * proj;

        double gain = 1.0;
        if (geom.model == ElementModel::CosinePower)
        {
            arma::vec3 boresight = direction_to_source(geom.orientations(m, 0), geom.orientations(m, 1));
            double c = arma::dot(to_source, boresight);
            gain = std::pow(std::max(0.0, c), geom.cos_exponent);
        }

        s[m] = std::polar(gain, phase);
    }
    return s;
}

ArrayGeometry make_cylinder_array(std::size_t n_cols, std::size_t n_rows, double spacing_m,
                                  ElementModel model, double cos_exponent)
{
    if (n_cols < 2 || n_rows < 1)
        raise(errc::grid_invalid, "cylinder needs >= 2 columns and >= 1 row");

    // Adjacent columns sit a chord of spacing_m apart on the circle.
    double radius = 0.5 * spacing_m / std::sin(pi / double(n_cols));
    std::size_t m_count = n_cols * n_rows;

    ArrayGeometry g;
    g.positions.set_size(m_count, 3);
    g.orientations.set_size(m_count, 2);
    g.model = model;
    g.cos_exponent = cos_exponent;

    std::size_t idx = 0;
    for (std::size_t c = 0; c < n_cols; ++c)
    {
        double az = 2.0 * pi * double(c) / double(n_cols);
        for (std::size_t r = 0; r < n_rows; ++r, ++idx)
        {
            double z = (double(r) - 0.5 * double(n_rows - 1)) * spacing_m;
            g.positions(idx, 0) = radius * std::cos(az);
            g.positions(idx, 1) = radius * std::sin(az);
            g.positions(idx, 2) = z;
            g.orientations(idx, 0) = az;
            g.orientations(idx, 1) = 0.0;
        }
    }
    g.validate();
    return g;
}

ArrayGeometry make_linear_array(std::size_t m, double spacing_m)
{
    if (m < 1)
        raise(errc::grid_invalid, "linear array needs >= 1 element");

    ArrayGeometry g;
    g.positions.zeros(m, 3);
    g.orientations.zeros(m, 2);
    for (std::size_t i = 0; i < m; ++i)
        g.positions(i, 0) = (double(i) - 0.5 * double(m - 1)) * spacing_m;
    g.validate();
    return g;
}

ArrayGeometry make_ring_array(std::size_t m, double spacing_m)
{
    if (m < 2)
        raise(errc::grid_invalid, "ring array needs >= 2 elements");

    double radius = 0.5 * spacing_m / std::sin(pi / double(m));
    ArrayGeometry g;
    g.positions.set_size(m, 3);
    g.orientations.zeros(m, 2);
    for (std::size_t i = 0; i < m; ++i)
    {
        double az = 2.0 * pi * double(i) / double(m);
        g.positions(i, 0) = radius * std::cos(az);
        g.positions(i, 1) = radius * std::sin(az);
        g.positions(i, 2) = 0.0;
        g.orientations(i, 0) = az;
    }
    g.validate();
    return g;
}

ArrayGeometry make_single_element()
{
    ArrayGeometry g;
    g.positions.zeros(1, 3);
    g.orientations.zeros(1, 2);
    g.validate();
    return g;
}

ArrayGeometry geometry_preset(const std::string &name)
{
    if (name == "cylinder64")
        return make_cylinder_array(16, 4, default_spacing, ElementModel::CosinePower, 2.0);
    if (name == "single")
        return make_single_element();

    auto parse_count = [&](const std::string &prefix) -> long {
        if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0)
            return -1;
        try
        {
            std::size_t used = 0;
            long v = std::stol(name.substr(prefix.size()), &used);
            if (used != name.size() - prefix.size())
                return -1;
            return v;
        }
        catch (...)
        {
            return -1;
        }
    };

    if (long m = parse_count("linear"); m > 0)
        return make_linear_array(std::size_t(m), default_spacing);
    if (long m = parse_count("ring"); m > 1)
        return make_ring_array(std::size_t(m), default_spacing);

    raise(errc::config_invalid, "unknown geometry preset: " + name);
}

} // namespace chx
