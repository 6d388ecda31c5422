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

#ifndef chx_sage_delay_scan_H
#define chx_sage_delay_scan_H

#include <complex>
#include <cstddef>
#include <vector>

#include "core/frequency_grid.hpp"

namespace chx
{

// Delay search grid specification. The uniform form is bin-indexed,
// tau_n = n / (bins * spacing), resolved against the training grid when the
// scan runs; that layout lets the correlation over all bins collapse to one
// FFT per data row.
class DelayGrid
{
  public:
    static DelayGrid uniform_bins(std::size_t bins);
    static DelayGrid explicit_grid(std::vector<double> taus);

    bool is_uniform() const { return uniform_; }
    std::size_t bins() const { return bins_; }
    const std::vector<double> &taus() const { return taus_; }

  private:
    bool uniform_ = true;
    std::size_t bins_ = 4096;
    std::vector<double> taus_;
};

// Grid resolved against a concrete training grid: concrete tau values plus
// whether the FFT fast path applies.
struct BoundDelayGrid
{
    std::vector<double> taus;
    bool fft_path = false;
    std::size_t fft_size = 0;
};

BoundDelayGrid bind_delay_grid(const DelayGrid &grid, const FrequencyGrid &train_grid);

// sum_k v[k] * exp(+j 2 pi f(k) tau), the correlation of v against a
// unit-modulus delay steering sequence.
std::complex<double> correlate_delay(const std::complex<double> *v, std::size_t count,
                                     const FrequencyGrid &grid, double tau);

// obj[n] = |correlate_delay(v, tau_n)|^2 over the bound grid, via one
// backward FFT when the fast path applies.
std::vector<double> delay_objective_vector(const std::complex<double> *v, std::size_t count,
                                           const FrequencyGrid &grid, const BoundDelayGrid &bound);

// obj[n] = sum over rows of |correlate_delay(row, tau_n)|^2 for an M x K
// matrix stored row-contiguous as rows[m] pointers.
std::vector<double> delay_objective_rows(const std::vector<const std::complex<double> *> &rows,
                                         std::size_t count, const FrequencyGrid &grid,
                                         const BoundDelayGrid &bound);

} // namespace chx

#endif
