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

#include "array/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "common/binary_io.hpp"
#include "common/error.hpp"
#include "common/parallel.hpp"

namespace chx
{

static constexpr double two_pi = 6.28318530717958647692;
static constexpr double half_pi = 1.57079632679489661923;

void ArrayPattern::validate() const
{
    if (n_az() < 1 || n_el() < 1 || freq_grid.count < 1 || m_count < 1)
        raise(errc::grid_invalid, "pattern grids must be nonempty");
    if (response.size() != n_az() * n_el() * n_freq() * m_count)
        raise(errc::dimension_mismatch, "pattern payload size does not match grids");

    for (std::size_t i = 1; i < n_az(); ++i)
        if (!(az_grid[i] > az_grid[i - 1]))
            raise(errc::grid_invalid, "azimuth grid must be strictly ascending");
    if (az_grid[n_az() - 1] - az_grid[0] >= two_pi)
        raise(errc::grid_invalid, "azimuth grid must span less than 2 pi");

    for (std::size_t j = 1; j < n_el(); ++j)
        if (!(el_grid[j] > el_grid[j - 1]))
            raise(errc::grid_invalid, "elevation grid must be strictly ascending");
    if (!(el_grid[0] > -half_pi) || !(el_grid[n_el() - 1] <= half_pi))
        raise(errc::grid_invalid, "elevation grid must lie inside (-pi/2, pi/2]");
}

ArrayPattern synth_calibration(const ArrayGeometry &geom, const arma::vec &az_grid,
                               const arma::vec &el_grid, const FrequencyGrid &freq_grid)
{
    geom.validate();

    ArrayPattern pat;
    pat.az_grid = az_grid;
    pat.el_grid = el_grid;
    pat.freq_grid = freq_grid;
    pat.m_count = geom.n_elements();
    pat.response.resize(az_grid.n_elem * el_grid.n_elem * freq_grid.count * pat.m_count);
    pat.validate();

    parallel_for(az_grid.n_elem, [&](std::size_t i) {
        for (std::size_t j = 0; j < el_grid.n_elem; ++j)
            for (std::size_t k = 0; k < freq_grid.count; ++k)
            {
                arma::cx_vec s = steering_vector(geom, az_grid[i], el_grid[j], freq_grid.frequency(k));
                std::memcpy(pat.node(i, j, k), s.memptr(), pat.m_count * sizeof(std::complex<double>));
            }
    });

    return pat;
}

namespace
{

struct AxisBlend
{
    std::size_t lo = 0, hi = 0;
    double t = 0.0; // weight of hi
};

// Segment of an ascending grid containing q, with q clamped to the hull.
// Exact t in {0, 1} when q sits on a node.
AxisBlend locate(const arma::vec &grid, double q)
{
    std::size_t n = grid.n_elem;
    if (n == 1)
        return {0, 0, 0.0};

    const double *begin = grid.memptr();
    const double *end = begin + n;
    std::size_t seg = std::size_t(std::upper_bound(begin, end, q) - begin);
    if (seg < 1)
        seg = 1;
    if (seg > n - 1)
        seg = n - 1;

    double t = (q - grid[seg - 1]) / (grid[seg] - grid[seg - 1]);
    if (t < 0.0)
        t = 0.0;
    if (t > 1.0)
        t = 1.0;
    return {seg - 1, seg, t};
}

AxisBlend locate_azimuth(const arma::vec &az, double phi)
{
    std::size_t n = az.n_elem;
    if (n == 1)
        return {0, 0, 0.0};

    // Keep in-span queries untouched so node hits stay exact; remap the
    // rest into [az[0], az[0] + 2 pi).
    double q = phi;
    if (q < az[0] || q > az[n - 1])
    {
        double w = std::fmod(phi - az[0], two_pi);
        if (w < 0.0)
            w += two_pi;
        if (w >= two_pi)
            w = 0.0;
        q = az[0] + w;
    }

    if (q <= az[n - 1])
        return locate(az, q);

    // Wrap segment between the last node and the first node + 2 pi.
    double span = az[0] + two_pi - az[n - 1];
    double t = (q - az[n - 1]) / span;
    if (t < 0.0)
        t = 0.0;
    if (t > 1.0)
        t = 1.0;
    return {n - 1, 0, t};
}

void check_hull(double q, double lo, double hi, const char *what)
{
    double slack = 1e-9 * std::max({1.0, std::abs(lo), std::abs(hi)});
    if (q < lo - slack || q > hi + slack)
        raise(errc::out_of_hull, std::string(what) + " outside calibration hull");
}

} // namespace

void pattern_lookup_into(const ArrayPattern &pat, double phi, double theta, double f,
                         std::complex<double> *out)
{
    check_hull(theta, pat.el_grid[0], pat.el_grid[pat.n_el() - 1], "elevation");
    check_hull(f, pat.freq_grid.f_start, pat.freq_grid.f_end(), "frequency");

    AxisBlend a = locate_azimuth(pat.az_grid, phi);
    AxisBlend e = locate(pat.el_grid, std::clamp(theta, pat.el_grid[0], pat.el_grid[pat.n_el() - 1]));

    AxisBlend fb{0, 0, 0.0};
    if (pat.freq_grid.count > 1)
    {
        double pos = (std::clamp(f, pat.freq_grid.f_start, pat.freq_grid.f_end()) - pat.freq_grid.f_start) /
                     pat.freq_grid.spacing;
        double idx = std::floor(pos);
        if (idx > double(pat.freq_grid.count - 2))
            idx = double(pat.freq_grid.count - 2);
        fb.lo = std::size_t(idx);
        fb.hi = fb.lo + 1;
        fb.t = std::clamp(pos - idx, 0.0, 1.0);
    }

    std::size_t m_count = pat.m_count;
    for (std::size_t m = 0; m < m_count; ++m)
        out[m] = {0.0, 0.0};

    // Up to 8 corners; zero-weight corners are skipped, which keeps node
    // queries exactly equal to the stored vectors.
    const std::size_t ai[2] = {a.lo, a.hi};
    const double aw[2] = {1.0 - a.t, a.t};
    const std::size_t ei[2] = {e.lo, e.hi};
    const double ew[2] = {1.0 - e.t, e.t};
    const std::size_t fi[2] = {fb.lo, fb.hi};
    const double fw[2] = {1.0 - fb.t, fb.t};

    for (int ia = 0; ia < 2; ++ia)
    {
        if (aw[ia] == 0.0 || (ia == 1 && ai[1] == ai[0]))
            continue;
        for (int ie = 0; ie < 2; ++ie)
        {
            if (ew[ie] == 0.0 || (ie == 1 && ei[1] == ei[0]))
                continue;
            for (int jf = 0; jf < 2; ++jf)
            {
                if (fw[jf] == 0.0 || (jf == 1 && fi[1] == fi[0]))
                    continue;
                double w = aw[ia] * ew[ie] * fw[jf];
                const std::complex<double> *src = pat.node(ai[ia], ei[ie], fi[jf]);
                for (std::size_t m = 0; m < m_count; ++m)
                    out[m] += w * src[m];
            }
        }
    }
}

arma::cx_vec pattern_lookup(const ArrayPattern &pat, double phi, double theta, double f)
{
    arma::cx_vec out(pat.m_count);
    pattern_lookup_into(pat, phi, theta, f, out.memptr());
    return out;
}

ArrayPattern virtual_array_from_element(const ArrayPattern &element_pattern,
                                        const std::vector<VirtualPose> &poses)
{
    if (element_pattern.m_count != 1)
        raise(errc::dimension_mismatch, "virtual array construction needs a single-element pattern");
    if (poses.empty())
        raise(errc::pose_invalid, "pose list is empty");
    for (const auto &p : poses)
        if (!p.position.is_finite() || !std::isfinite(p.az_rotation))
            raise(errc::pose_invalid, "pose entries must be finite");

    ArrayPattern out;
    out.az_grid = element_pattern.az_grid;
    out.el_grid = element_pattern.el_grid;
    out.freq_grid = element_pattern.freq_grid;
    out.m_count = poses.size();
    out.response.resize(out.n_az() * out.n_el() * out.n_freq() * out.m_count);

    parallel_for(out.n_az(), [&](std::size_t i) {
        std::complex<double> element_value;
        for (std::size_t j = 0; j < out.n_el(); ++j)
            for (std::size_t k = 0; k < out.n_freq(); ++k)
            {
                double f = out.freq_grid.frequency(k);
                double wavenumber = two_pi * f / speed_of_light;
                arma::vec3 to_source = direction_to_source(out.az_grid[i], out.el_grid[j]);
                std::complex<double> *dst = out.node(i, j, k);
                for (std::size_t m = 0; m < poses.size(); ++m)
                {
                    pattern_lookup_into(element_pattern, out.az_grid[i] - poses[m].az_rotation,
                                        out.el_grid[j], f, &element_value);
                    double proj = to_source[0] * poses[m].position[0] +
                                  to_source[1] * poses[m].position[1] +
                                  to_source[2] * poses[m].position[2];
                    dst[m] = element_value * std::polar(1.0, wavenumber * proj);
                }
            }
    });

    out.validate();
    return out;
}

static const char pattern_magic[8] = {'C', 'H', 'P', '1', 0, 0, 0, 0};

void save_pattern(const ArrayPattern &pat, const std::string &path)
{
    le_writer w;
    w.put_bytes(pattern_magic, 8);
    w.put_u32(std::uint32_t(pat.n_az()));
    w.put_u32(std::uint32_t(pat.n_el()));
    w.put_u32(std::uint32_t(pat.m_count));
    w.put_u32(std::uint32_t(pat.n_freq()));
    for (std::size_t i = 0; i < pat.n_az(); ++i)
        w.put_f64(pat.az_grid[i]);
    for (std::size_t j = 0; j < pat.n_el(); ++j)
        w.put_f64(pat.el_grid[j]);
    w.put_f64(pat.freq_grid.f_start);
    w.put_f64(pat.freq_grid.spacing);

    for (std::size_t i = 0; i < pat.n_az(); ++i)
        for (std::size_t j = 0; j < pat.n_el(); ++j)
            for (std::size_t m = 0; m < pat.m_count; ++m)
                for (std::size_t k = 0; k < pat.n_freq(); ++k)
                {
                    const auto &v = pat.node(i, j, k)[m];
                    w.put_f64(v.real());
                    w.put_f64(v.imag());
                }

    w.write_file(path);
}

ArrayPattern load_pattern(const std::string &path)
{
    le_reader r = le_reader::from_file(path);

    char magic[8];
    r.get_bytes(magic, 8);
    if (std::memcmp(magic, pattern_magic, 8) != 0)
        raise(errc::io_failure, "not a CHP1 pattern file: " + path);

    std::uint32_t n_az = r.get_u32();
    std::uint32_t n_el = r.get_u32();
    std::uint32_t m = r.get_u32();
    std::uint32_t k_cal = r.get_u32();
    if (n_az < 1 || n_el < 1 || m < 1 || k_cal < 1)
        raise(errc::io_failure, "CHP1 header has empty dimensions: " + path);

    ArrayPattern pat;
    pat.az_grid.set_size(n_az);
    for (std::uint32_t i = 0; i < n_az; ++i)
        pat.az_grid[i] = r.get_f64();
    pat.el_grid.set_size(n_el);
    for (std::uint32_t j = 0; j < n_el; ++j)
        pat.el_grid[j] = r.get_f64();
    double f_start = r.get_f64();
    double spacing = r.get_f64();
    pat.freq_grid = FrequencyGrid(f_start, spacing, k_cal);
    pat.m_count = m;

    if (r.remaining() != std::size_t(n_az) * n_el * m * k_cal * 16)
        raise(errc::io_failure, "CHP1 payload size mismatch: " + path);

    pat.response.resize(std::size_t(n_az) * n_el * k_cal * m);
    for (std::uint32_t i = 0; i < n_az; ++i)
        for (std::uint32_t j = 0; j < n_el; ++j)
            for (std::uint32_t mm = 0; mm < m; ++mm)
                for (std::uint32_t k = 0; k < k_cal; ++k)
                {
                    double re = r.get_f64();
                    double im = r.get_f64();
                    pat.node(i, j, k)[mm] = {re, im};
                }

    pat.validate();
    return pat;
}

} // namespace chx
