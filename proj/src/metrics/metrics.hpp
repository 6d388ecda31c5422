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

#ifndef chx_metrics_metrics_H
#define chx_metrics_metrics_H

#include <cstdint>
#include <string>
#include <vector>

#include <armadillo>

#include "core/channel_matrix.hpp"

namespace chx
{

// Exact-match and orthogonal cases are reported as -infinity (a real IEEE
// value), never as NaN.

// 10*log10(||h_true - h_est||^2 / M)
double mse_db(const arma::cx_vec &h_true, const arma::cx_vec &h_est);

struct BeamformingGains
{
    double bg_meas; // ||h_true||^2, beamforming on the measured channel
    double bg_est;  // |h_est' h_true|^2 / ||h_est||^2
    double bg_uni;  // bg_meas / M, the uniform (CSI-free) reference
};

BeamformingGains beamforming_gains(const arma::cx_vec &h_true, const arma::cx_vec &h_est);

// 10*log10(|h_est' h_true|^2 / (||h_est||^2 ||h_true||^2)), always <= 0 dB.
double beamforming_efficiency_db(const arma::cx_vec &h_true, const arma::cx_vec &h_est);

struct LinkBudget
{
    double tx_snr_db = 0.0;

    void validate() const;
    double rho() const; // 10^(tx_snr_db/10)
};

enum class PrecoderScheme
{
    Mr,
    Zf
};

struct PrecoderSet
{
    arma::cx_mat vectors; // M x N, one unit-norm column per UE
    PrecoderScheme scheme = PrecoderScheme::Mr;
};

// Channels of the co-scheduled UEs; all share one element count and grid.
struct MultiUserChannel
{
    std::vector<const ChannelMatrix *> per_ue;

    void validate() const;
    std::size_t n_ue() const { return per_ue.size(); }
    arma::cx_mat at_frequency(std::size_t k) const; // M x N column stack
};

// Precoders from the estimated per-UE channels at one frequency (columns of
// h_est). MR takes the conjugate channel; ZF right-inverts the N x N Gram
// of the estimated columns, which zeroes inter-user crosstalk on the
// estimated channel. Columns are normalized to unit norm individually.
PrecoderSet precode(const arma::cx_mat &h_est, PrecoderScheme scheme, double cond_cap = 1e12);
PrecoderSet precode(const MultiUserChannel &mu, std::size_t freq_index, PrecoderScheme scheme,
                    double cond_cap = 1e12);

// SINR_n = rho |h_n^T w_n|^2 / (rho sum_{n' != n} |h_n^T w_n'|^2 + 1),
// evaluated with the TRUE channels h against precoders built from the
// estimated ones.
arma::vec sinr(const arma::cx_mat &h_true, const PrecoderSet &prec, const LinkBudget &lb);

double spectral_efficiency(double sinr_linear); // log2(1 + sinr)

struct MetricsRow
{
    double f_hz = 0.0;
    std::uint32_t ue_id = 0;
    double mse_db = 0.0;
    double be_db = 0.0;
    double bg_meas = 0.0;
    double bg_est = 0.0;
    double bg_uni = 0.0;
    double sinr_db_mr = 0.0;
    double se_mr = 0.0;
    double sinr_db_zf = 0.0;
    double se_zf = 0.0;
};

// 17-significant-digit decimal; infinities spelled "inf"/"-inf".
std::string format_metric(double v);

extern const char *const metrics_csv_header;

std::string metrics_to_csv(const std::vector<MetricsRow> &rows);
void write_metrics_csv(const std::string &path, const std::vector<MetricsRow> &rows);

} // namespace chx

#endif
