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

#include "parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace chx
{

std::size_t worker_count()
{
    std::size_t n = std::thread::hardware_concurrency();
    if (n == 0)
        n = 1;
    if (const char *env = std::getenv("CHX_THREADS"))
    {
        char *end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1 && std::size_t(v) < n)
            n = std::size_t(v);
    }
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn)
{
    if (n == 0)
        return;

    std::size_t workers = worker_count();
    if (workers > n)
        workers = n;

    if (workers == 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }

    std::exception_ptr first_error = nullptr;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(workers);

    std::size_t chunk = n / workers, extra = n % workers, begin = 0;
    std::vector<std::exception_ptr> errors(workers, nullptr);

    for (std::size_t w = 0; w < workers; ++w)
    {
        std::size_t end = begin + chunk + (w < extra ? 1 : 0);
        pool.emplace_back([&, w, begin, end]() {
            try
            {
                for (std::size_t i = begin; i < end && !failed.load(std::memory_order_relaxed); ++i)
                    fn(i);
            }
            catch (...)
            {
                errors[w] = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
            }
        });
        begin = end;
    }
    for (auto &t : pool)
        t.join();

    for (auto &e : errors)
        if (e)
        {
            first_error = e;
            break;
        }
    if (first_error)
        std::rethrow_exception(first_error);
}

} // namespace chx
