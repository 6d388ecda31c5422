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

#include "sage/delay_scan.hpp"

#include <cmath>
#include <cstring>
#include <mutex>

#include <fftw3.h>

#include "common/error.hpp"

namespace chx
{

static constexpr double two_pi = 6.28318530717958647692;

DelayGrid DelayGrid::uniform_bins(std::size_t bins)
{
    if (bins < 1)
        raise(errc::grid_empty, "delay grid needs at least one bin");
    DelayGrid g;
    g.uniform_ = true;
    g.bins_ = bins;
    return g;
}

DelayGrid DelayGrid::explicit_grid(std::vector<double> taus)
{
    if (taus.empty())
        raise(errc::grid_empty, "delay grid is empty");
    for (std::size_t i = 0; i < taus.size(); ++i)
    {
        if (!std::isfinite(taus[i]) || taus[i] < 0.0)
            raise(errc::grid_invalid, "delay grid entries must be finite and >= 0");
        if (i > 0 && !(taus[i] > taus[i - 1]))
            raise(errc::grid_invalid, "delay grid must be strictly ascending");
    }
    DelayGrid g;
    g.uniform_ = false;
    g.bins_ = taus.size();
    g.taus_ = std::move(taus);
    return g;
}

BoundDelayGrid bind_delay_grid(const DelayGrid &grid, const FrequencyGrid &train_grid)
{
    BoundDelayGrid b;
    if (grid.is_uniform())
    {
        std::size_t n = grid.bins();
        double bin = 1.0 / (double(n) * train_grid.spacing);
        b.taus.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            b.taus[i] = double(i) * bin;
        // The DFT index matches the bin index only when nothing aliases,
        // i.e. the transform is at least as long as the data.
        b.fft_path = n >= train_grid.count;
        b.fft_size = n;
    }
    else
    {
        b.taus = grid.taus();
        double unambiguous = 1.0 / train_grid.spacing;
        if (b.taus.back() >= unambiguous)
            raise(errc::grid_invalid, "delay grid exceeds the unambiguous range 1/spacing");
        b.fft_path = false;
    }
    return b;
}

std::complex<double> correlate_delay(const std::complex<double> *v, std::size_t count,
                                     const FrequencyGrid &grid, double tau)
{
    std::complex<double> phase = std::polar(1.0, two_pi * grid.f_start * tau);
    std::complex<double> step = std::polar(1.0, two_pi * grid.spacing * tau);
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t k = 0; k < count; ++k)
    {
        acc += v[k] * phase;
        phase *= step;
    }
    return acc;
}

namespace
{

// FFTW's planner is not reentrant; plan creation and destruction are
// serialized. Execution on private buffers is thread-safe.
std::mutex &planner_mutex()
{
    static std::mutex m;
    return m;
}

class BackwardFft
{
  public:
    explicit BackwardFft(std::size_t n) : n_(n)
    {
        in_ = fftw_alloc_complex(n);
        out_ = fftw_alloc_complex(n);
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan_ = fftw_plan_dft_1d(int(n), in_, out_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    ~BackwardFft()
    {
        {
            std::lock_guard<std::mutex> lock(planner_mutex());
            fftw_destroy_plan(plan_);
        }
        fftw_free(in_);
        fftw_free(out_);
    }

    BackwardFft(const BackwardFft &) = delete;
    BackwardFft &operator=(const BackwardFft &) = delete;

    // out[n] = sum_k v[k] e^{+j 2 pi k n / N}, v zero-padded to N.
    const fftw_complex *transform(const std::complex<double> *v, std::size_t count)
    {
        std::memcpy(in_, v, count * sizeof(fftw_complex));
        std::memset(in_ + count, 0, (n_ - count) * sizeof(fftw_complex));
        fftw_execute(plan_);
        return out_;
    }

  private:
    std::size_t n_;
    fftw_complex *in_;
    fftw_complex *out_;
    fftw_plan plan_;
};

void accumulate_direct(const std::complex<double> *v, std::size_t count, const FrequencyGrid &grid,
                       const std::vector<double> &taus, std::vector<double> &obj)
{
    for (std::size_t n = 0; n < taus.size(); ++n)
        obj[n] += std::norm(correlate_delay(v, count, grid, taus[n]));
}

} // namespace

std::vector<double> delay_objective_vector(const std::complex<double> *v, std::size_t count,
                                           const FrequencyGrid &grid, const BoundDelayGrid &bound)
{
    std::vector<const std::complex<double> *> rows{v};
    return delay_objective_rows(rows, count, grid, bound);
}

std::vector<double> delay_objective_rows(const std::vector<const std::complex<double> *> &rows,
                                         std::size_t count, const FrequencyGrid &grid,
                                         const BoundDelayGrid &bound)
{
    std::vector<double> obj(bound.taus.size(), 0.0);

    if (bound.fft_path)
    {
        // e^{+j 2 pi f_k tau_n} = e^{+j 2 pi f_start tau_n} e^{+j 2 pi k n / N};
        // the leading factor is unit-modulus, so |correlation| = |DFT bin|.
        BackwardFft fft(bound.fft_size);
        for (const auto *row : rows)
        {
            const fftw_complex *g = fft.transform(row, count);
            for (std::size_t n = 0; n < obj.size(); ++n)
                obj[n] += g[n][0] * g[n][0] + g[n][1] * g[n][1];
        }
        return obj;
    }

    for (const auto *row : rows)
        accumulate_direct(row, count, grid, bound.taus, obj);
    return obj;
}

} // namespace chx
