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

#ifndef chx_synth_mpc_H
#define chx_synth_mpc_H

#include <armadillo>
#include <cmath>
#include <complex>

#include "common/error.hpp"

namespace chx
{

// One path of the direction-of-arrival model: complex amplitude, delay and
// the azimuth/elevation the array pattern is evaluated at.
struct MpcDoa
{
    std::complex<double> alpha{0.0, 0.0};
    double tau = 0.0;   // seconds
    double phi = 0.0;   // radians
    double theta = 0.0; // radians

    void validate() const
    {
        if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
            raise(errc::grid_invalid, "path amplitude must be finite");
        if (!std::isfinite(tau) || tau < 0.0)
            raise(errc::grid_invalid, "path delay must be finite and >= 0");
        if (!std::isfinite(phi) || !std::isfinite(theta))
            raise(errc::grid_invalid, "path angles must be finite");
    }
};

// One path of the vector-spatial-signature model: an abstract M x 1 complex
// array response plus a delay; needs no array calibration.
struct MpcVss
{
    arma::cx_vec a_vec;
    double tau = 0.0; // seconds

    void validate() const
    {
        if (a_vec.n_elem < 1 || !a_vec.is_finite())
            raise(errc::grid_invalid, "spatial signature must be nonempty and finite");
        if (!std::isfinite(tau) || tau < 0.0)
            raise(errc::grid_invalid, "path delay must be finite and >= 0");
    }
};

} // namespace chx

#endif
