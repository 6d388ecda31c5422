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

#include "core/channel_io.hpp"

#include <cstring>

#include "common/binary_io.hpp"

namespace chx
{

static const char channel_magic[8] = {'C', 'H', 'X', '1', 0, 0, 0, 0};

void save_channel(const ChannelMatrix &h, const std::string &path)
{
    le_writer w;
    w.put_bytes(channel_magic, 8);
    w.put_u32(std::uint32_t(h.data.n_rows));
    w.put_u32(std::uint32_t(h.data.n_cols));
    w.put_f64(h.grid.f_start);
    w.put_f64(h.grid.spacing);
    w.put_u8(std::uint8_t(h.stage));

    for (std::size_t m = 0; m < h.data.n_rows; ++m)
        for (std::size_t k = 0; k < h.data.n_cols; ++k)
        {
            const auto &v = h.data(m, k);
            w.put_f64(v.real());
            w.put_f64(v.imag());
        }

    w.write_file(path);
}

ChannelMatrix load_channel(const std::string &path)
{
    le_reader r = le_reader::from_file(path);

    char magic[8];
    r.get_bytes(magic, 8);
    if (std::memcmp(magic, channel_magic, 8) != 0)
        raise(errc::io_failure, "not a CHX1 channel file: " + path);

    std::uint32_t m = r.get_u32();
    std::uint32_t k = r.get_u32();
    double f_start = r.get_f64();
    double spacing = r.get_f64();
    std::uint8_t stage = r.get_u8();

    if (m < 1 || k < 1)
        raise(errc::io_failure, "CHX1 header has empty dimensions: " + path);
    if (stage > 2)
        raise(errc::io_failure, "CHX1 header has unknown stage tag: " + path);
    if (r.remaining() != std::size_t(m) * k * 16)
        raise(errc::io_failure, "CHX1 payload size mismatch: " + path);

    arma::cx_mat data(m, k);
    for (std::uint32_t i = 0; i < m; ++i)
        for (std::uint32_t j = 0; j < k; ++j)
        {
            double re = r.get_f64();
            double im = r.get_f64();
            data(i, j) = {re, im};
        }

    return ChannelMatrix(std::move(data), FrequencyGrid(f_start, spacing, k), Stage(stage));
}

} // namespace chx
