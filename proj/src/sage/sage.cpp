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

#include "sage/sage.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"
#include "json.hpp"

namespace chx
{

static constexpr double two_pi = 6.28318530717958647692;

// Relative margin a candidate must beat the incumbent objective by before
// it replaces it. Improvements claimed by one evaluation method (FFT scan)
// must survive re-evaluation by another (direct correlation); requiring a
// clear win keeps the residual trace monotone against rounding noise.
static constexpr double improvement_margin = 1e-12;

void SageConfig::validate() const
{
    if (l_paths < 1)
        raise(errc::config_invalid, "path count must be >= 1");
    if (max_cycles < 1)
        raise(errc::config_invalid, "max_cycles must be >= 1");
    if (!(convergence_tol > 0.0))
        raise(errc::config_invalid, "convergence tolerance must be positive");
}

namespace
{

arma::cx_mat recon_block_vss(const MpcVss &p, const FrequencyGrid &grid)
{
    arma::cx_mat out(p.a_vec.n_elem, grid.count);
    for (std::size_t k = 0; k < grid.count; ++k)
        out.col(k) = p.a_vec * std::polar(1.0, -two_pi * grid.frequency(k) * p.tau);
    return out;
}

arma::cx_mat recon_block_doa(const MpcDoa &p, const ArrayPattern &pat, const FrequencyGrid &grid)
{
    arma::cx_mat out(pat.m_count, grid.count);
    std::vector<std::complex<double>> a(pat.m_count);
    for (std::size_t k = 0; k < grid.count; ++k)
    {
        double f = grid.frequency(k);
        pattern_lookup_into(pat, p.phi, p.theta, f, a.data());
        std::complex<double> rot = p.alpha * std::polar(1.0, -two_pi * f * p.tau);
        for (std::size_t m = 0; m < pat.m_count; ++m)
            out(m, k) = rot * a[m];
    }
    return out;
}

arma::cx_mat recon_block(const SageEstimate &est, std::size_t l, const FrequencyGrid &grid,
                         const ArrayPattern *pattern)
{
    if (est.model == SageModel::Vss)
        return recon_block_vss(est.vss_paths[l], grid);
    return recon_block_doa(est.doa_paths[l], *pattern, grid);
}

double residual_energy(const arma::cx_mat &r)
{
    double e = 0.0;
    for (const auto &v : r)
        e += std::norm(v);
    return e;
}

double refinement_step(const BoundDelayGrid &bound, const FrequencyGrid &train_grid)
{
    if (bound.taus.size() >= 2)
    {
        double gap = bound.taus[1] - bound.taus[0];
        for (std::size_t i = 2; i < bound.taus.size(); ++i)
            gap = std::min(gap, bound.taus[i] - bound.taus[i - 1]);
        return gap;
    }
    return 1.0 / (double(train_grid.count) * train_grid.spacing);
}

std::size_t nearest_node(const arma::vec &grid, double v)
{
    const double *begin = grid.memptr();
    const double *end = begin + grid.n_elem;
    std::size_t hi = std::size_t(std::lower_bound(begin, end, v) - begin);
    if (hi == 0)
        return 0;
    if (hi >= grid.n_elem)
        return grid.n_elem - 1;
    return (v - grid[hi - 1] <= grid[hi] - v) ? hi - 1 : hi;
}

// Per-delay objective pieces at one calibration node: c[k] is the data
// correlated against the node's array response at each training frequency,
// norm2 the squared Frobenius norm of that response. The model fit quality
// at delay tau is |sum_k c_k e^{+j 2 pi f_k tau}|^2 / norm2.
struct NodeScan
{
    arma::cx_vec c;
    double norm2 = 0.0;
};

NodeScan doa_node_scan(const ArrayPattern &pat, std::size_t i_az, std::size_t j_el,
                       const arma::cx_mat &x, const FrequencyGrid &grid)
{
    NodeScan ns;
    ns.c.set_size(grid.count);
    std::vector<std::complex<double>> a(pat.m_count);
    for (std::size_t k = 0; k < grid.count; ++k)
    {
        pattern_lookup_into(pat, pat.az_grid[i_az], pat.el_grid[j_el], grid.frequency(k), a.data());
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t m = 0; m < pat.m_count; ++m)
        {
            acc += std::conj(a[m]) * x(m, k);
            ns.norm2 += std::norm(a[m]);
        }
        ns.c[k] = acc;
    }
    return ns;
}

} // namespace

MpcVss maximize_vss(const arma::cx_mat &x, const DelayGrid &delay_grid,
                    const FrequencyGrid &train_grid, std::size_t refinement_levels,
                    const MpcVss *incumbent)
{
    if (x.n_cols != train_grid.count)
        raise(errc::dimension_mismatch, "data columns do not match training grid");

    BoundDelayGrid bound = bind_delay_grid(delay_grid, train_grid);
    std::size_t m_count = x.n_rows, k_count = x.n_cols;

    arma::cx_mat xt = x.st(); // rows become contiguous columns
    std::vector<const std::complex<double> *> rows(m_count);
    for (std::size_t m = 0; m < m_count; ++m)
        rows[m] = xt.colptr(m);

    auto direct_objective = [&](double tau) {
        double s = 0.0;
        for (std::size_t m = 0; m < m_count; ++m)
            s += std::norm(correlate_delay(rows[m], k_count, train_grid, tau));
        return s;
    };

    std::vector<double> obj = delay_objective_rows(rows, k_count, train_grid, bound);
    std::size_t best = 0;
    for (std::size_t n = 1; n < obj.size(); ++n)
        if (obj[n] > obj[best])
            best = n;

    double tau = bound.taus[best];
    double score = obj[best];

    if (incumbent)
    {
        double held = direct_objective(incumbent->tau);
        if (!(score > held * (1.0 + improvement_margin)))
        {
            tau = incumbent->tau;
            score = held;
        }
    }

    double step = refinement_step(bound, train_grid);
    double upper = 1.0 / train_grid.spacing;
    for (std::size_t level = 0; level < refinement_levels; ++level)
    {
        step /= 10.0;
        double center = tau;
        for (int d = -10; d <= 10; ++d)
        {
            if (d == 0)
                continue;
            double t = center + double(d) * step;
            if (t < 0.0 || t >= upper)
                continue;
            double o = direct_objective(t);
            if (o > score * (1.0 + improvement_margin))
            {
                score = o;
                tau = t;
            }
        }
    }

    arma::cx_vec a(m_count, arma::fill::zeros);
    for (std::size_t k = 0; k < k_count; ++k)
        a += x.col(k) * std::polar(1.0, two_pi * train_grid.frequency(k) * tau);
    a /= double(k_count);

    MpcVss out;
    out.a_vec = std::move(a);
    out.tau = tau;
    return out;
}

MpcDoa maximize_doa(const arma::cx_mat &x, const ArrayPattern &pattern, const SageConfig &cfg,
                    const FrequencyGrid &train_grid, const MpcDoa *incumbent)
{
    pattern.validate();
    if (x.n_cols != train_grid.count)
        raise(errc::dimension_mismatch, "data columns do not match training grid");
    if (x.n_rows != pattern.m_count)
        raise(errc::dimension_mismatch, "data rows do not match pattern element count");

    double slack = 1e-9 * std::max(1.0, std::abs(pattern.freq_grid.f_end()));
    if (train_grid.f_start < pattern.freq_grid.f_start - slack ||
        train_grid.f_end() > pattern.freq_grid.f_end() + slack)
        raise(errc::out_of_hull, "training grid extends beyond the calibration frequency hull");

    BoundDelayGrid bound = bind_delay_grid(cfg.delay_grid, train_grid);
    std::size_t k_count = train_grid.count;

    std::size_t i_az = 0, j_el = 0;
    double tau = 0.0;
    double score = -1.0; // objective |<s,x>|^2 / ||s||^2, negative = unset

    auto node_objective = [&](const NodeScan &ns, double t) {
        if (!(ns.norm2 > 0.0))
            return -1.0;
        return std::norm(correlate_delay(ns.c.memptr(), k_count, train_grid, t)) / ns.norm2;
    };

    auto tau_scan = [&]() {
        NodeScan ns = doa_node_scan(pattern, i_az, j_el, x, train_grid);
        if (!(ns.norm2 > 0.0))
            return;

        std::vector<double> obj = delay_objective_vector(ns.c.memptr(), k_count, train_grid, bound);
        std::size_t best = 0;
        for (std::size_t n = 1; n < obj.size(); ++n)
            if (obj[n] > obj[best])
                best = n;
        double cand_score = obj[best] / ns.norm2;
        if (score < 0.0 || cand_score > score * (1.0 + improvement_margin))
        {
            tau = bound.taus[best];
            score = cand_score;
        }

        double step = refinement_step(bound, train_grid);
        double upper = 1.0 / train_grid.spacing;
        for (std::size_t level = 0; level < cfg.refinement_levels; ++level)
        {
            step /= 10.0;
            double center = tau;
            for (int d = -10; d <= 10; ++d)
            {
                if (d == 0)
                    continue;
                double t = center + double(d) * step;
                if (t < 0.0 || t >= upper)
                    continue;
                double o = node_objective(ns, t);
                if (o > score * (1.0 + improvement_margin))
                {
                    score = o;
                    tau = t;
                }
            }
        }
    };

    auto azimuth_scan = [&]() {
        long best = -1;
        double best_score = -1.0;
        for (std::size_t i = 0; i < pattern.n_az(); ++i)
        {
            NodeScan ns = doa_node_scan(pattern, i, j_el, x, train_grid);
            double o = node_objective(ns, tau);
            if (o > best_score)
            {
                best_score = o;
                best = long(i);
            }
        }
        if (best >= 0 && (score < 0.0 || best_score > score * (1.0 + improvement_margin)))
        {
            i_az = std::size_t(best);
            score = best_score;
        }
    };

    auto elevation_scan = [&]() {
        long best = -1;
        double best_score = -1.0;
        for (std::size_t j = 0; j < pattern.n_el(); ++j)
        {
            NodeScan ns = doa_node_scan(pattern, i_az, j, x, train_grid);
            double o = node_objective(ns, tau);
            if (o > best_score)
            {
                best_score = o;
                best = long(j);
            }
        }
        if (best >= 0 && (score < 0.0 || best_score > score * (1.0 + improvement_margin)))
        {
            j_el = std::size_t(best);
            score = best_score;
        }
    };

    std::size_t coherent_sweeps = 2;
    if (incumbent)
    {
        i_az = nearest_node(pattern.az_grid, incumbent->phi);
        j_el = nearest_node(pattern.el_grid, incumbent->theta);
        tau = incumbent->tau;
        NodeScan ns = doa_node_scan(pattern, i_az, j_el, x, train_grid);
        score = node_objective(ns, tau);
    }
    else
    {
        // Seeding sweep: a pattern-free delay scan, then the two angle
        // scans; this counts as the first of the two coordinate sweeps.
        arma::cx_mat xt = x.st();
        std::vector<const std::complex<double> *> rows(x.n_rows);
        for (std::size_t m = 0; m < x.n_rows; ++m)
            rows[m] = xt.colptr(m);
        std::vector<double> obj = delay_objective_rows(rows, k_count, train_grid, bound);
        std::size_t best = 0;
        for (std::size_t n = 1; n < obj.size(); ++n)
            if (obj[n] > obj[best])
                best = n;
        tau = bound.taus[best];
        j_el = nearest_node(pattern.el_grid, 0.0);
        azimuth_scan();
        elevation_scan();
        coherent_sweeps = 1;
    }

    for (std::size_t sweep = 0; sweep < coherent_sweeps; ++sweep)
    {
        tau_scan();
        azimuth_scan();
        elevation_scan();
    }

    NodeScan ns = doa_node_scan(pattern, i_az, j_el, x, train_grid);
    std::complex<double> alpha{0.0, 0.0};
    if (ns.norm2 > 0.0)
        alpha = correlate_delay(ns.c.memptr(), k_count, train_grid, tau) / ns.norm2;

    MpcDoa out;
    out.alpha = alpha;
    out.tau = tau;
    out.phi = pattern.az_grid[i_az];
    out.theta = pattern.el_grid[j_el];
    return out;
}

SageEstimate sage_init(const ChannelMatrix &h_u, const SageConfig &cfg, const ArrayPattern *pattern)
{
    cfg.validate();
    if (h_u.n_freq() < 2)
        raise(errc::dimension_mismatch, "training matrix needs at least two frequency columns");
    if (cfg.model == SageModel::Doa && pattern == nullptr)
        raise(errc::pattern_missing, "direction model requires a calibration pattern");
    if (pattern && pattern->m_count != h_u.n_antennas())
        raise(errc::dimension_mismatch, "pattern element count does not match channel rows");

    SageEstimate est;
    est.model = cfg.model;

    arma::cx_mat residual = h_u.data;
    for (std::size_t l = 0; l < cfg.l_paths; ++l)
    {
        if (cfg.model == SageModel::Vss)
        {
            MpcVss p = maximize_vss(residual, cfg.delay_grid, h_u.grid, cfg.refinement_levels);
            residual -= recon_block_vss(p, h_u.grid);
            est.vss_paths.push_back(std::move(p));
        }
        else
        {
            MpcDoa p = maximize_doa(residual, *pattern, cfg, h_u.grid);
            residual -= recon_block_doa(p, *pattern, h_u.grid);
            est.doa_paths.push_back(p);
        }
    }

    est.residual_energy_trace.push_back(residual_energy(residual));
    return est;
}

arma::cx_mat expectation_step(const ChannelMatrix &h_u, const SageEstimate &est,
                              std::size_t path_index, const ArrayPattern *pattern)
{
    std::size_t l_count = est.path_count();
    if (path_index < 1 || path_index > l_count)
        raise(errc::index_out_of_range, "path index must be in [1, L]");
    if (est.model == SageModel::Doa && pattern == nullptr)
        raise(errc::pattern_missing, "direction model requires a calibration pattern");

    arma::cx_mat x = h_u.data;
    for (std::size_t l = 0; l < l_count; ++l)
        if (l != path_index - 1)
            x -= recon_block(est, l, h_u.grid, pattern);
    return x;
}

SageEstimate sage_run(const ChannelMatrix &h_u, const SageConfig &cfg, const ArrayPattern *pattern)
{
    SageEstimate est = sage_init(h_u, cfg, pattern);

    auto total_residual = [&]() {
        arma::cx_mat r = h_u.data;
        for (std::size_t l = 0; l < est.path_count(); ++l)
            r -= recon_block(est, l, h_u.grid, pattern);
        return residual_energy(r);
    };

    double prev = est.residual_energy_trace.front();
    for (std::size_t cycle = 1; cycle <= cfg.max_cycles; ++cycle)
    {
        for (std::size_t i = 1; i <= cfg.l_paths; ++i)
        {
            arma::cx_mat x = expectation_step(h_u, est, i, pattern);
            if (cfg.model == SageModel::Vss)
            {
                MpcVss inc = est.vss_paths[i - 1];
                est.vss_paths[i - 1] =
                    maximize_vss(x, cfg.delay_grid, h_u.grid, cfg.refinement_levels, &inc);
            }
            else
            {
                MpcDoa inc = est.doa_paths[i - 1];
                est.doa_paths[i - 1] = maximize_doa(x, *pattern, cfg, h_u.grid, &inc);
            }
        }

        double current = total_residual();
        est.residual_energy_trace.push_back(current);
        est.cycles_run = cycle;

        if (prev - current <= cfg.convergence_tol * prev)
        {
            est.converged = true;
            break;
        }
        prev = current;
    }

    return est;
}

namespace
{

void reconstruct_into(const SageEstimate &est, double f, const ArrayPattern *pattern,
                      std::complex<double> *out, std::size_t m_count,
                      std::vector<std::complex<double>> &scratch)
{
    for (std::size_t m = 0; m < m_count; ++m)
        out[m] = {0.0, 0.0};

    if (est.model == SageModel::Vss)
    {
        for (const auto &p : est.vss_paths)
        {
            std::complex<double> rot = std::polar(1.0, -two_pi * f * p.tau);
            for (std::size_t m = 0; m < m_count; ++m)
                out[m] += rot * p.a_vec[m];
        }
        return;
    }

    for (const auto &p : est.doa_paths)
    {
        pattern_lookup_into(*pattern, p.phi, p.theta, f, scratch.data());
        std::complex<double> rot = p.alpha * std::polar(1.0, -two_pi * f * p.tau);
        for (std::size_t m = 0; m < m_count; ++m)
            out[m] += rot * scratch[m];
    }
}

std::size_t estimate_m_count(const SageEstimate &est, const ArrayPattern *pattern)
{
    if (est.model == SageModel::Doa)
    {
        if (pattern == nullptr)
            raise(errc::pattern_missing, "direction model requires a calibration pattern");
        return pattern->m_count;
    }
    if (est.vss_paths.empty())
        raise(errc::grid_empty, "estimate has no paths");
    return est.vss_paths.front().a_vec.n_elem;
}

} // namespace

arma::cx_vec reconstruct(const SageEstimate &est, double f, const ArrayPattern *pattern)
{
    std::size_t m_count = estimate_m_count(est, pattern);
    arma::cx_vec out(m_count);
    std::vector<std::complex<double>> scratch(m_count);
    reconstruct_into(est, f, pattern, out.memptr(), m_count, scratch);
    return out;
}

ChannelMatrix reconstruct_grid(const SageEstimate &est, const FrequencyGrid &grid,
                               const ArrayPattern *pattern)
{
    std::size_t m_count = estimate_m_count(est, pattern);
    arma::cx_mat data(m_count, grid.count);
    std::vector<std::complex<double>> scratch(m_count);
    for (std::size_t k = 0; k < grid.count; ++k)
        reconstruct_into(est, grid.frequency(k), pattern, data.colptr(k), m_count, scratch);
    return ChannelMatrix(std::move(data), grid, Stage::Compensated);
}

std::string estimate_to_json(const SageEstimate &est)
{
    nlohmann::json j;
    j["model"] = est.model == SageModel::Vss ? "vss" : "doa";
    j["L"] = est.path_count();
    j["paths"] = nlohmann::json::array();

    if (est.model == SageModel::Vss)
    {
        for (const auto &p : est.vss_paths)
        {
            nlohmann::json jp;
            jp["tau_s"] = p.tau;
            jp["a_re"] = nlohmann::json::array();
            jp["a_im"] = nlohmann::json::array();
            for (const auto &v : p.a_vec)
            {
                jp["a_re"].push_back(v.real());
                jp["a_im"].push_back(v.imag());
            }
            j["paths"].push_back(std::move(jp));
        }
    }
    else
    {
        for (const auto &p : est.doa_paths)
            j["paths"].push_back({{"alpha_re", p.alpha.real()},
                                  {"alpha_im", p.alpha.imag()},
                                  {"tau_s", p.tau},
                                  {"phi_rad", p.phi},
                                  {"theta_rad", p.theta}});
    }
    return j.dump(2) + "\n";
}

SageEstimate estimate_from_json(const std::string &text)
{
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(text);
    }
    catch (const std::exception &e)
    {
        raise(errc::config_invalid, std::string("estimate JSON parse failure: ") + e.what());
    }

    SageEstimate est;
    try
    {
        std::string model = j.at("model").get<std::string>();
        if (model == "vss")
            est.model = SageModel::Vss;
        else if (model == "doa")
            est.model = SageModel::Doa;
        else
            raise(errc::config_invalid, "estimate model must be vss or doa");

        std::size_t l_count = j.at("L").get<std::size_t>();
        for (const auto &jp : j.at("paths"))
        {
            if (est.model == SageModel::Vss)
            {
                MpcVss p;
                p.tau = jp.at("tau_s").get<double>();
                const auto &re = jp.at("a_re");
                const auto &im = jp.at("a_im");
                if (re.size() != im.size())
                    raise(errc::config_invalid, "signature re/im lengths differ");
                p.a_vec.set_size(re.size());
                for (std::size_t m = 0; m < re.size(); ++m)
                    p.a_vec[m] = {re[m].get<double>(), im[m].get<double>()};
                p.validate();
                est.vss_paths.push_back(std::move(p));
            }
            else
            {
                MpcDoa p;
                p.alpha = {jp.at("alpha_re").get<double>(), jp.at("alpha_im").get<double>()};
                p.tau = jp.at("tau_s").get<double>();
                p.phi = jp.at("phi_rad").get<double>();
                p.theta = jp.at("theta_rad").get<double>();
                p.validate();
                est.doa_paths.push_back(p);
            }
        }
        if (est.path_count() != l_count)
            raise(errc::config_invalid, "estimate L does not match path list length");
    }
    catch (const nlohmann::json::exception &e)
    {
        raise(errc::config_invalid, std::string("estimate JSON missing field: ") + e.what());
    }
    return est;
}

} // namespace chx
