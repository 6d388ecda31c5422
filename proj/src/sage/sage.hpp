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

#ifndef chx_sage_sage_H
#define chx_sage_sage_H

#include <optional>
#include <string>
#include <vector>

#include "array/pattern.hpp"
#include "core/channel_matrix.hpp"
#include "sage/delay_scan.hpp"
#include "synth/mpc.hpp"

namespace chx
{

enum class SageModel
{
    Vss,
    Doa
};

struct SageConfig
{
    SageModel model = SageModel::Vss;
    std::size_t l_paths = 1;
    DelayGrid delay_grid = DelayGrid::uniform_bins(4096);
    std::size_t max_cycles = 30;
    double convergence_tol = 1e-6;
    std::size_t refinement_levels = 2;

    void validate() const;
};

// Estimation result: the per-path parameters plus the residual-energy trace
// (entry 0 after initialization, then one entry per completed cycle). The
// trace is non-increasing; each update step keeps its incumbent unless a
// candidate strictly beats it.
struct SageEstimate
{
    SageModel model = SageModel::Vss;
    std::vector<MpcVss> vss_paths;
    std::vector<MpcDoa> doa_paths;
    std::vector<double> residual_energy_trace;
    std::size_t cycles_run = 0;
    bool converged = false;

    std::size_t path_count() const
    {
        return model == SageModel::Vss ? vss_paths.size() : doa_paths.size();
    }
};

// Initialization by successive cancellation: each path is fitted to the
// residual of the previously initialized ones and subtracted, so paths come
// out strongest-first.
SageEstimate sage_init(const ChannelMatrix &h_u, const SageConfig &cfg,
                       const ArrayPattern *pattern = nullptr);

// Residual with every path except path_index (1-based) cancelled from h_u.
arma::cx_mat expectation_step(const ChannelMatrix &h_u, const SageEstimate &est,
                              std::size_t path_index, const ArrayPattern *pattern = nullptr);

// Single-path fit of the vector-spatial-signature model: 1-D delay scan
// with the per-delay signature in closed form,
//   a_hat(tau) = (1/K) sum_k x(:,k) e^{+j 2 pi f_k tau},
// maximizing ||a_hat||^2, then refinement_levels rounds of 10x local grid
// subdivision around the winner. A supplied incumbent is kept unless a
// candidate strictly improves on it.
MpcVss maximize_vss(const arma::cx_mat &x, const DelayGrid &delay_grid,
                    const FrequencyGrid &train_grid, std::size_t refinement_levels = 2,
                    const MpcVss *incumbent = nullptr);

// Single-path fit of the direction model by coordinate-wise 1-D searches in
// the order tau, phi, theta (two sweeps), angles restricted to the
// calibration grid nodes, amplitude in closed form at each candidate.
MpcDoa maximize_doa(const arma::cx_mat &x, const ArrayPattern &pattern, const SageConfig &cfg,
                    const FrequencyGrid &train_grid, const MpcDoa *incumbent = nullptr);

// Full run: initialization, then cycles of per-path cancellation and
// re-maximization until the relative residual-energy decrease drops below
// convergence_tol or max_cycles is reached.
SageEstimate sage_run(const ChannelMatrix &h_u, const SageConfig &cfg,
                      const ArrayPattern *pattern = nullptr);

// Model sum at one frequency, usable inside the training band and beyond
// it. The direction model needs the pattern and f inside its hull.
arma::cx_vec reconstruct(const SageEstimate &est, double f, const ArrayPattern *pattern = nullptr);

// reconstruct() across a whole grid, stage Compensated.
ChannelMatrix reconstruct_grid(const SageEstimate &est, const FrequencyGrid &grid,
                               const ArrayPattern *pattern = nullptr);

// JSON {model, L, paths:[...]}; the paths carry exactly the model's real
// parameters (2M+1 per path for the signature model, 5 per path for the
// direction model). Round-trip lossless for doubles.
std::string estimate_to_json(const SageEstimate &est);
SageEstimate estimate_from_json(const std::string &text);

} // namespace chx

#endif
