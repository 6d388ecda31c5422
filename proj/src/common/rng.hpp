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

#ifndef chx_common_rng_H
#define chx_common_rng_H

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace chx
{

// splitmix64 step, used to derive independent sub-streams from a base seed.
// std::seed_seq is not guaranteed bit-stable across implementations, this is.
inline std::uint64_t splitmix64(std::uint64_t &state)
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic child seed for stream `index` of stream family `tag`.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag, std::uint64_t index = 0)
{
    std::uint64_t s = base;
    std::uint64_t a = splitmix64(s);
    s ^= tag * 0xD6E8FEB86659FD93ULL;
    std::uint64_t b = splitmix64(s);
    s ^= index * 0xCA5A826395121157ULL;
    std::uint64_t c = splitmix64(s);
    return a ^ (b << 1) ^ c;
}

// Deterministic random source. Wraps mt19937_64 but generates uniforms and
// normals with fixed arithmetic instead of std::*_distribution, whose output
// sequences differ between standard library implementations.
class rng
{
  public:
    explicit rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform()
    {
        return double(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi)
    {
        return lo + (hi - lo) * uniform();
    }

    // Uniform integer on [lo, hi] by rejection, bias-free.
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi)
    {
        std::uint64_t span = hi - lo + 1ULL;
        if (span == 0ULL)
            return engine_();
        std::uint64_t limit = UINT64_MAX - (UINT64_MAX % span + 1ULL) % span;
        std::uint64_t draw = engine_();
        while (draw > limit)
            draw = engine_();
        return lo + draw % span;
    }

    // Standard normal via Box-Muller (polar form avoided to keep the draw
    // count per normal fixed at one pair per two values).
    double normal()
    {
        if (have_spare_)
        {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Circularly-symmetric complex normal with E[|z|^2] = 1.
    std::complex<double> cnormal()
    {
        double re = normal();
        double im = normal();
        return {re * 0.7071067811865475244, im * 0.7071067811865475244};
    }

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace chx

#endif
