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

#ifndef chx_common_parallel_H
#define chx_common_parallel_H

#include <cstddef>
#include <functional>

namespace chx
{

// Worker cap: min(hardware_concurrency, CHX_THREADS if set). Always >= 1.
std::size_t worker_count();

// Runs fn(i) for i in [0, n). Work is split into per-worker contiguous
// chunks with a deterministic layout, so any fn that writes only to cell i
// produces output independent of the worker count. Exceptions from workers
// are rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn);

} // namespace chx

#endif
