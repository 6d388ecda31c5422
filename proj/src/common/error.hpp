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

#ifndef chx_common_error_H
#define chx_common_error_H

#include <stdexcept>
#include <string>

namespace chx
{

// Failure kinds carried by every chx::error. The C API and the CLI map these
// onto their numeric status / exit codes.
enum class errc
{
    grid_mismatch = 1,
    division_guard,
    zero_matrix,
    band_out_of_range,
    grid_invalid,
    out_of_hull,
    pose_invalid,
    dimension_mismatch,
    pattern_missing,
    grid_empty,
    index_out_of_range,
    zero_estimate,
    zero_vector,
    singular_gram,
    config_invalid,
    io_failure
};

const char *errc_name(errc c);

class error : public std::runtime_error
{
  public:
    error(errc code, const std::string &message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    errc code() const noexcept { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string &message)
{
    throw error(code, message);
}

inline const char *errc_name(errc c)
{
    switch (c)
    {
    case errc::grid_mismatch:
        return "GridMismatch";
    case errc::division_guard:
        return "DivisionGuard";
    case errc::zero_matrix:
        return "ZeroMatrix";
    case errc::band_out_of_range:
        return "BandOutOfRange";
    case errc::grid_invalid:
        return "GridInvalid";
    case errc::out_of_hull:
        return "OutOfHull";
    case errc::pose_invalid:
        return "PoseInvalid";
    case errc::dimension_mismatch:
        return "DimensionMismatch";
    case errc::pattern_missing:
        return "PatternMissing";
    case errc::grid_empty:
        return "GridEmpty";
    case errc::index_out_of_range:
        return "IndexOutOfRange";
    case errc::zero_estimate:
        return "ZeroEstimate";
    case errc::zero_vector:
        return "ZeroVector";
    case errc::singular_gram:
        return "SingularGram";
    case errc::config_invalid:
        return "ConfigInvalid";
    case errc::io_failure:
        return "IoFailure";
    }
    return "Unknown";
}

} // namespace chx

#endif
