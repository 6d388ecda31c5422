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

#include "metrics/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "common/binary_io.hpp"
#include "common/error.hpp"

namespace chx
{

static const double neg_inf = -std::numeric_limits<double>::infinity();

double mse_db(const arma::cx_vec &h_true, const arma::cx_vec &h_est)
{
    if (h_true.n_elem == 0 || h_true.n_elem != h_est.n_elem)
        raise(errc::dimension_mismatch, "channel vectors must have equal nonzero length");

    double err = 0.0;
    for (std::size_t m = 0; m < h_true.n_elem; ++m)
        err += std::norm(h_true[m] - h_est[m]);
    if (err <= 0.0)
        return neg_inf;
    return 10.0 * std::log10(err / double(h_true.n_elem));
}

BeamformingGains beamforming_gains(const arma::cx_vec &h_true, const arma::cx_vec &h_est)
{
    if (h_true.n_elem == 0 || h_true.n_elem != h_est.n_elem)
        raise(errc::dimension_mismatch, "channel vectors must have equal nonzero length");

    double meas = 0.0, est_norm2 = 0.0;
    std::complex<double> ip{0.0, 0.0};
    for (std::size_t m = 0; m < h_true.n_elem; ++m)
    {
        meas += std::norm(h_true[m]);
        est_norm2 += std::norm(h_est[m]);
        ip += std::conj(h_est[m]) * h_true[m];
    }
    if (est_norm2 <= 0.0)
        raise(errc::zero_estimate, "estimated channel is zero");

    BeamformingGains g;
    g.bg_meas = meas;
    g.bg_est = std::norm(ip) / est_norm2;
    g.bg_uni = meas / double(h_true.n_elem);
    return g;
}

double beamforming_efficiency_db(const arma::cx_vec &h_true, const arma::cx_vec &h_est)
{
    if (h_true.n_elem == 0 || h_true.n_elem != h_est.n_elem)
        raise(errc::dimension_mismatch, "channel vectors must have equal nonzero length");

    double true_norm2 = 0.0, est_norm2 = 0.0;
    std::complex<double> ip{0.0, 0.0};
    for (std::size_t m = 0; m < h_true.n_elem; ++m)
    {
        true_norm2 += std::norm(h_true[m]);
        est_norm2 += std::norm(h_est[m]);
        ip += std::conj(h_est[m]) * h_true[m];
    }
    if (true_norm2 <= 0.0 || est_norm2 <= 0.0)
        raise(errc::zero_vector, "efficiency undefined for a zero vector");

    // Cauchy-Schwarz bounds the ratio by 1; clamp so rounding in the three
    // accumulations can never push the result above 0 dB.
    double ratio = std::norm(ip) / (est_norm2 * true_norm2);
    if (ratio > 1.0)
        ratio = 1.0;
    if (ratio <= 0.0)
        return neg_inf;
    return 10.0 * std::log10(ratio);
}

void LinkBudget::validate() const
{
    if (!std::isfinite(tx_snr_db))
        raise(errc::config_invalid, "tx_snr_db must be finite");
}

double LinkBudget::rho() const
{
    return std::pow(10.0, tx_snr_db / 10.0);
}

void MultiUserChannel::validate() const
{
    if (per_ue.empty())
        raise(errc::config_invalid, "multiuser group needs at least one UE");
    for (const auto *cm : per_ue)
    {
        if (cm == nullptr)
            raise(errc::config_invalid, "null channel in multiuser group");
        if (cm->n_antennas() != per_ue.front()->n_antennas() ||
            !(cm->grid == per_ue.front()->grid))
            raise(errc::grid_mismatch, "multiuser channels must share element count and grid");
    }
}

arma::cx_mat MultiUserChannel::at_frequency(std::size_t k) const
{
    validate();
    if (k >= per_ue.front()->grid.count)
        raise(errc::index_out_of_range, "frequency index outside grid");
    arma::cx_mat out(per_ue.front()->n_antennas(), per_ue.size());
    for (std::size_t n = 0; n < per_ue.size(); ++n)
        out.col(n) = per_ue[n]->data.col(k);
    return out;
}

PrecoderSet precode(const arma::cx_mat &h_est, PrecoderScheme scheme, double cond_cap)
{
    if (h_est.n_rows == 0 || h_est.n_cols == 0)
        raise(errc::dimension_mismatch, "estimated channel stack is empty");

    PrecoderSet out;
    out.scheme = scheme;

    if (scheme == PrecoderScheme::Mr)
    {
        out.vectors.set_size(h_est.n_rows, h_est.n_cols);
        for (std::size_t n = 0; n < h_est.n_cols; ++n)
        {
            arma::cx_vec w = arma::conj(h_est.col(n));
            double nn = arma::norm(w);
            if (!(nn > 0.0))
                raise(errc::zero_estimate, "cannot precode a zero estimated channel");
            out.vectors.col(n) = w / nn;
        }
        return out;
    }

    arma::cx_mat cH = arma::conj(h_est);
    arma::cx_mat gram = h_est.st() * cH; // N x N
    arma::vec sv;
    if (!arma::svd(sv, gram))
        raise(errc::singular_gram, "Gram decomposition failed");
    double smin = sv.min(), smax = sv.max();
    if (!(smin > 0.0) || smax / smin >= cond_cap)
        raise(errc::singular_gram, "estimated channels too close to co-located");

    arma::cx_mat inv_gram;
    if (!arma::inv(inv_gram, gram))
        raise(errc::singular_gram, "Gram inversion failed");

    arma::cx_mat w = cH * inv_gram;
    out.vectors.set_size(w.n_rows, w.n_cols);
    for (std::size_t n = 0; n < w.n_cols; ++n)
    {
        double nn = arma::norm(w.col(n));
        if (!(nn > 0.0))
            raise(errc::singular_gram, "degenerate zero-forcing direction");
        out.vectors.col(n) = w.col(n) / nn;
    }
    return out;
}

PrecoderSet precode(const MultiUserChannel &mu, std::size_t freq_index, PrecoderScheme scheme,
                    double cond_cap)
{
    return precode(mu.at_frequency(freq_index), scheme, cond_cap);
}

arma::vec sinr(const arma::cx_mat &h_true, const PrecoderSet &prec, const LinkBudget &lb)
{
    lb.validate();
    if (h_true.n_rows != prec.vectors.n_rows || h_true.n_cols != prec.vectors.n_cols)
        raise(errc::dimension_mismatch, "channel and precoder dimensions differ");

    double rho = lb.rho();
    std::size_t n_ue = h_true.n_cols;
    arma::cx_mat cross = h_true.st() * prec.vectors; // cross(n, n') = h_n^T w_n'

    arma::vec out(n_ue);
    for (std::size_t n = 0; n < n_ue; ++n)
    {
        double interference = 0.0;
        for (std::size_t j = 0; j < n_ue; ++j)
            if (j != n)
                interference += std::norm(cross(n, j));
        out[n] = rho * std::norm(cross(n, n)) / (rho * interference + 1.0);
    }
    return out;
}

double spectral_efficiency(double sinr_linear)
{
    return std::log2(1.0 + sinr_linear);
}

std::string format_metric(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const char *const metrics_csv_header =
    "f_Hz,ue_id,mse_db,be_db,bg_meas,bg_est,bg_uni,sinr_db_mr,se_mr,sinr_db_zf,se_zf";

std::string metrics_to_csv(const std::vector<MetricsRow> &rows)
{
    std::string out = metrics_csv_header;
    out += "\n";
    for (const auto &r : rows)
    {
        out += format_metric(r.f_hz);
        out += ",";
        out += std::to_string(r.ue_id);
        for (double v : {r.mse_db, r.be_db, r.bg_meas, r.bg_est, r.bg_uni, r.sinr_db_mr, r.se_mr,
                         r.sinr_db_zf, r.se_zf})
        {
            out += ",";
            out += format_metric(v);
        }
        out += "\n";
    }
    return out;
}

void write_metrics_csv(const std::string &path, const std::vector<MetricsRow> &rows)
{
    write_text_file(path, metrics_to_csv(rows));
}

} // namespace chx
