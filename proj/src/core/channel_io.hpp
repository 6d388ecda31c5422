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

#ifndef chx_core_channel_io_H
#define chx_core_channel_io_H

#include <string>

#include "core/channel_matrix.hpp"

namespace chx
{

// "CHX1" channel container: 8-byte magic "CHX1\0\0\0\0", little-endian
// u32 M, u32 K, f64 f_start_Hz, f64 spacing_Hz, u8 stage, then M*K samples
// as interleaved f64 (re, im) in antenna-major order (all K samples of
// antenna 0, then antenna 1, ...).
void save_channel(const ChannelMatrix &h, const std::string &path);
ChannelMatrix load_channel(const std::string &path);

} // namespace chx

#endif
