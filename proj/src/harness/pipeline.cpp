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

#include "harness/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>

#include "array/geometry.hpp"
#include "array/pattern.hpp"
#include "common/binary_io.hpp"
#include "common/error.hpp"
#include "common/parallel.hpp"
#include "common/rng.hpp"
#include "core/channel_io.hpp"
#include "json.hpp"

namespace chx
{

namespace
{

constexpr std::uint64_t scenario_tag = 0x5C3A;
constexpr std::uint64_t noise_tag = 0x401E;

const double neg_inf = -std::numeric_limits<double>::infinity();

bool at_least(PipelineStage a, PipelineStage b)
{
    return int(a) >= int(b);
}

double db_or_floor(double linear)
{
    return linear > 0.0 ? 10.0 * std::log10(linear) : neg_inf;
}

arma::vec az_nodes(const CalibrationSettings &cal)
{
    const double pi = 3.14159265358979323846;
    arma::vec az(cal.n_az);
    for (std::size_t i = 0; i < cal.n_az; ++i)
        az[i] = -pi + 2.0 * pi * double(i) / double(cal.n_az);
    return az;
}

arma::vec el_nodes(const CalibrationSettings &cal)
{
    arma::vec el(cal.n_el);
    for (std::size_t j = 0; j < cal.n_el; ++j)
        el[j] = cal.el_lo + (cal.el_hi - cal.el_lo) * double(j) / double(cal.n_el - 1);
    return el;
}

FrequencyGrid calibration_freq_grid(const FrequencyGrid &full, const CalibrationSettings &cal)
{
    if (full.count < 2)
        raise(errc::config_invalid, "measurement grid needs at least two nodes");
    double span = double(full.count - 1) * full.spacing;
    return FrequencyGrid(full.f_start, span / double(cal.freq_points - 1), cal.freq_points);
}

SageConfig sage_config_for(const ExperimentConfig &cfg, SageModel model, std::size_t l)
{
    SageConfig sc;
    sc.model = model;
    sc.l_paths = l;
    sc.delay_grid = DelayGrid::uniform_bins(cfg.sage.delay_bins);
    sc.max_cycles = cfg.sage.max_cycles;
    sc.convergence_tol = cfg.sage.convergence_tol;
    sc.refinement_levels = cfg.sage.refinement_levels;
    return sc;
}

// mu_groups plus implicit singletons for every UE not listed.
std::vector<std::vector<std::size_t>> full_grouping(const ExperimentConfig &cfg)
{
    std::vector<std::vector<std::size_t>> groups = cfg.mu_groups;
    std::vector<bool> covered(cfg.ue_count, false);
    for (const auto &g : groups)
        for (std::size_t u : g)
            covered[u] = true;
    for (std::size_t u = 0; u < cfg.ue_count; ++u)
        if (!covered[u])
            groups.push_back({u});
    return groups;
}

struct Timer
{
    std::chrono::steady_clock::time_point mark = std::chrono::steady_clock::now();

    double lap()
    {
        auto now = std::chrono::steady_clock::now();
        double s = std::chrono::duration<double>(now - mark).count();
        mark = now;
        return s;
    }
};

ExperimentReport run_pipeline_impl(const ExperimentConfig &cfg, PipelineStage upto,
                                   const char *&stage)
{
    ExperimentReport rep;
    rep.config = cfg;
    Timer timer;

    bool need_pattern = cfg.source != ScenarioSource::ChannelFile;
    for (SageModel m : cfg.models)
        if (m == SageModel::Doa)
            need_pattern = true;

    ChannelMatrix loaded;
    if (cfg.source == ScenarioSource::ChannelFile)
        loaded = load_channel(cfg.channel_file);

    FrequencyGrid grid_full =
        cfg.source == ScenarioSource::ChannelFile ? loaded.grid : cfg.grid;
    rep.band = TrainingBand::from_center(grid_full, cfg.train_center_hz, cfg.train_width_hz);

    std::optional<ArrayPattern> pattern;
    if (need_pattern)
    {
        ArrayGeometry geom = geometry_preset(cfg.geometry);
        pattern = synth_calibration(geom, az_nodes(cfg.calibration), el_nodes(cfg.calibration),
                                    calibration_freq_grid(grid_full, cfg.calibration));
    }
    const ArrayPattern *pat = pattern ? &*pattern : nullptr;
    rep.timings.push_back({"setup", timer.lap()});

    stage = "synthesize";
    std::size_t n_ue = cfg.ue_count;
    rep.scenarios.resize(n_ue);
    rep.measured.resize(n_ue);
    std::vector<ChannelMatrix> truth_clean(n_ue);

    Scenario shared_scenario;
    if (cfg.source == ScenarioSource::File)
        shared_scenario = load_scenario(cfg.scenario_file);
    else if (cfg.source == ScenarioSource::Inline)
        shared_scenario = cfg.inline_scenario;

    AngleHull hull;
    hull.el_lo = cfg.calibration.el_lo;
    hull.el_hi = cfg.calibration.el_hi;

    parallel_for(n_ue, [&](std::size_t u) {
        if (cfg.source == ScenarioSource::ChannelFile)
        {
            truth_clean[u] = loaded;
        }
        else
        {
            Scenario sc;
            if (cfg.source == ScenarioSource::Preset)
            {
                sc = scenario_preset(cfg.preset, pat->m_count, derive_seed(cfg.seed, scenario_tag, u),
                                     hull);
                sc.geometry_preset = cfg.geometry;
            }
            else
            {
                sc = shared_scenario;
            }
            sc.ue_id = std::uint32_t(u);
            truth_clean[u] = synth_channel_doa(sc.paths, *pat, grid_full);
            rep.scenarios[u] = std::move(sc);
        }
        rep.measured[u] = add_noise(truth_clean[u], cfg.snr_db, derive_seed(cfg.seed, noise_tag, u));
    });
    rep.timings.push_back({"synthesize", timer.lap()});

    if (!at_least(upto, PipelineStage::Estimate))
        return rep;

    stage = "estimate";
    std::size_t n_combo = cfg.models.size() * cfg.l_sweep.size();
    rep.combos.resize(n_combo);
    {
        std::size_t c = 0;
        for (SageModel m : cfg.models)
            for (std::size_t l : cfg.l_sweep)
            {
                rep.combos[c].model = m;
                rep.combos[c].l_paths = l;
                rep.combos[c].estimates.resize(n_ue);
                ++c;
            }
    }

    rep.truth_scaled.resize(n_ue);
    rep.mu.resize(n_ue);

    parallel_for(n_ue, [&](std::size_t u) {
        NormalizeResult nr = normalize(rep.measured[u]);
        rep.mu[u] = nr.mu;
        rep.truth_scaled[u] =
            ChannelMatrix(truth_clean[u].data / nr.mu, grid_full, Stage::Normalized);
        ChannelMatrix h_u = select_training_band(nr.matrix, rep.band);

        for (auto &combo : rep.combos)
            combo.estimates[u] = sage_run(h_u, sage_config_for(cfg, combo.model, combo.l_paths),
                                          combo.model == SageModel::Doa ? pat : nullptr);
    });
    rep.timings.push_back({"estimate", timer.lap()});

    if (!at_least(upto, PipelineStage::Extrapolate))
        return rep;

    stage = "extrapolate";
    std::vector<std::vector<ChannelMatrix>> recon(n_combo);
    for (auto &r : recon)
        r.resize(n_ue);
    parallel_for(n_ue, [&](std::size_t u) {
        for (std::size_t c = 0; c < n_combo; ++c)
            recon[c][u] = reconstruct_grid(rep.combos[c].estimates[u], grid_full,
                                           rep.combos[c].model == SageModel::Doa ? pat : nullptr);
    });
    rep.timings.push_back({"extrapolate", timer.lap()});

    if (!at_least(upto, PipelineStage::Evaluate))
    {
        for (std::size_t c = 0; c < n_combo; ++c)
            rep.combos[c].recon = std::move(recon[c]);
        return rep;
    }

    stage = "evaluate";
    auto groups = full_grouping(cfg);
    std::vector<std::size_t> group_of(n_ue), pos_in_group(n_ue);
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (std::size_t p = 0; p < groups[g].size(); ++p)
        {
            group_of[groups[g][p]] = g;
            pos_in_group[groups[g][p]] = p;
        }

    std::size_t k_count = grid_full.count;
    for (std::size_t c = 0; c < n_combo; ++c)
    {
        auto &combo = rep.combos[c];
        combo.rows.reserve(k_count * n_ue);

        for (std::size_t k = 0; k < k_count; ++k)
        {
            std::vector<arma::vec> sinr_mr(groups.size()), sinr_zf(groups.size());
            for (std::size_t g = 0; g < groups.size(); ++g)
            {
                std::size_t gn = groups[g].size();
                arma::cx_mat h_true(rep.truth_scaled[groups[g][0]].n_antennas(), gn);
                arma::cx_mat h_est(h_true.n_rows, gn);
                bool zero_est = false;
                for (std::size_t p = 0; p < gn; ++p)
                {
                    std::size_t u = groups[g][p];
                    h_true.col(p) = rep.truth_scaled[u].data.col(k);
                    h_est.col(p) = recon[c][u].data.col(k);
                    if (!(arma::norm(h_est.col(p)) > 0.0))
                        zero_est = true;
                }
                if (zero_est)
                {
                    sinr_mr[g] = arma::vec(gn, arma::fill::zeros);
                    sinr_zf[g] = arma::vec(gn, arma::fill::zeros);
                }
                else
                {
                    sinr_mr[g] = sinr(h_true, precode(h_est, PrecoderScheme::Mr), cfg.link);
                    sinr_zf[g] = sinr(h_true, precode(h_est, PrecoderScheme::Zf), cfg.link);
                }
            }

            for (std::size_t u = 0; u < n_ue; ++u)
            {
                arma::cx_vec t = rep.truth_scaled[u].data.col(k);
                arma::cx_vec e = recon[c][u].data.col(k);
                double tn = 0.0, en = 0.0;
                for (std::size_t m = 0; m < t.n_elem; ++m)
                {
                    tn += std::norm(t[m]);
                    en += std::norm(e[m]);
                }

                MetricsRow row;
                row.f_hz = grid_full.frequency(k);
                row.ue_id = std::uint32_t(u);
                row.mse_db = mse_db(t, e);
                if (en > 0.0)
                {
                    BeamformingGains g = beamforming_gains(t, e);
                    row.bg_meas = g.bg_meas;
                    row.bg_est = g.bg_est;
                    row.bg_uni = g.bg_uni;
                }
                else
                {
                    row.bg_meas = tn;
                    row.bg_est = 0.0;
                    row.bg_uni = tn / double(t.n_elem);
                }
                row.be_db = (en > 0.0 && tn > 0.0) ? beamforming_efficiency_db(t, e) : neg_inf;

                double s_mr = sinr_mr[group_of[u]][pos_in_group[u]];
                double s_zf = sinr_zf[group_of[u]][pos_in_group[u]];
                row.sinr_db_mr = db_or_floor(s_mr);
                row.se_mr = spectral_efficiency(s_mr);
                row.sinr_db_zf = db_or_floor(s_zf);
                row.se_zf = spectral_efficiency(s_zf);

                combo.rows.push_back(row);
            }
        }
    }
    rep.timings.push_back({"evaluate", timer.lap()});

    return rep;
}

} // namespace

ExperimentReport run_pipeline(const ExperimentConfig &cfg, PipelineStage upto)
{
    cfg.validate();
    const char *stage = "setup";
    try
    {
        return run_pipeline_impl(cfg, upto, stage);
    }
    catch (const error &e)
    {
        raise(e.code(), std::string(stage) + " stage: " + e.what());
    }
}

namespace
{

std::string combo_tag(const ComboResult &combo)
{
    return sage_model_name(combo.model) + "_L" + std::to_string(combo.l_paths);
}

double percentile(std::vector<double> sorted, double p)
{
    if (sorted.empty())
        return neg_inf;
    double rank = p * double(sorted.size() - 1);
    std::size_t lo = std::size_t(rank);
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    double t = rank - double(lo);
    double a = sorted[lo], b = sorted[hi];
    if (std::isinf(a) || std::isinf(b))
        return t < 1.0 ? a : b;
    return a + t * (b - a);
}

nlohmann::json json_db(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (std::isnan(v))
        return nullptr;
    return v;
}

nlohmann::json offset_stats(const ExperimentReport &rep, const ComboResult &combo, double offset_hz)
{
    const FrequencyGrid &grid = rep.truth_scaled.empty() ? rep.config.grid
                                                         : rep.truth_scaled.front().grid;
    std::size_t n_ue = rep.config.ue_count;
    std::size_t k_lo = rep.band.a - 1;
    std::size_t k_hi = rep.band.a - 1 + rep.band.k_u - 1;

    std::vector<std::size_t> nodes;
    for (double f : {grid.frequency(k_lo) - offset_hz, grid.frequency(k_hi) + offset_hz})
    {
        double pos = (f - grid.f_start) / grid.spacing;
        long k = std::lround(pos);
        if (k >= 0 && std::size_t(k) < grid.count)
            nodes.push_back(std::size_t(k));
    }
    if (offset_hz == 0.0 && nodes.size() == 2 && nodes[0] == nodes[1])
        nodes.pop_back();

    std::vector<double> be, se_mr, se_zf;
    for (std::size_t k : nodes)
        for (std::size_t u = 0; u < n_ue; ++u)
        {
            const MetricsRow &row = combo.rows[k * n_ue + u];
            be.push_back(row.be_db);
            se_mr.push_back(row.se_mr);
            se_zf.push_back(row.se_zf);
        }

    std::sort(be.begin(), be.end());
    std::sort(se_mr.begin(), se_mr.end());
    std::sort(se_zf.begin(), se_zf.end());

    double mean_db = neg_inf, linear_mean = 0.0;
    if (!be.empty())
    {
        bool any_floor = false;
        double acc = 0.0;
        for (double v : be)
        {
            if (std::isinf(v))
                any_floor = true;
            else
                acc += v;
            linear_mean += std::pow(10.0, v / 10.0);
        }
        mean_db = any_floor ? neg_inf : acc / double(be.size());
        linear_mean /= double(be.size());
    }

    nlohmann::json j;
    j["offset_hz"] = offset_hz;
    j["be_db_values"] = nlohmann::json::array();
    for (double v : be)
        j["be_db_values"].push_back(json_db(v));
    j["be_db_median"] = json_db(percentile(be, 0.5));
    j["be_db_p10"] = json_db(percentile(be, 0.1));
    j["be_db_p90"] = json_db(percentile(be, 0.9));
    j["be_db_mean_of_db_values"] = json_db(mean_db);
    j["be_db_of_linear_mean"] = json_db(db_or_floor(linear_mean));
    j["se_mr_median"] = json_db(percentile(se_mr, 0.5));
    j["se_zf_median"] = json_db(percentile(se_zf, 0.5));
    return j;
}

nlohmann::json summary_json(const ExperimentReport &rep)
{
    nlohmann::json s;
    s["name"] = rep.config.name;
    s["seed"] = rep.config.seed;

    const FrequencyGrid &grid = rep.truth_scaled.empty() ? rep.config.grid
                                                         : rep.truth_scaled.front().grid;
    s["band"] = {{"offset", rep.band.a},
                 {"width", rep.band.k_u},
                 {"f_lo_hz", grid.frequency(rep.band.a - 1)},
                 {"f_hi_hz", grid.frequency(rep.band.a - 1 + rep.band.k_u - 1)}};

    s["combos"] = nlohmann::json::array();
    for (const auto &combo : rep.combos)
    {
        nlohmann::json jc;
        jc["model"] = sage_model_name(combo.model);
        jc["L"] = combo.l_paths;

        jc["diagnostics"] = nlohmann::json::array();
        for (std::size_t u = 0; u < combo.estimates.size(); ++u)
        {
            const SageEstimate &est = combo.estimates[u];
            jc["diagnostics"].push_back(
                {{"ue", u},
                 {"cycles_run", est.cycles_run},
                 {"converged", est.converged},
                 {"residual_initial", est.residual_energy_trace.front()},
                 {"residual_final", est.residual_energy_trace.back()}});
        }

        if (!combo.rows.empty())
        {
            std::size_t n_ue = rep.config.ue_count;
            std::vector<double> train_mse;
            for (std::size_t k = rep.band.a - 1; k < rep.band.a - 1 + rep.band.k_u; ++k)
                for (std::size_t u = 0; u < n_ue; ++u)
                    train_mse.push_back(combo.rows[k * n_ue + u].mse_db);
            std::sort(train_mse.begin(), train_mse.end());
            jc["training_mse_db_median"] = json_db(percentile(train_mse, 0.5));

            jc["offsets"] = nlohmann::json::array();
            for (double d : {0.0, rep.config.train_width_hz, 3.0 * rep.config.train_width_hz})
                jc["offsets"].push_back(offset_stats(rep, combo, d));
        }

        s["combos"].push_back(std::move(jc));
    }

    s["timings"] = nlohmann::json::array();
    for (const auto &t : rep.timings)
        s["timings"].push_back({{"stage", t.stage}, {"seconds", t.seconds}});
    return s;
}

} // namespace

void emit_report(const ExperimentReport &rep, const std::string &dir, PipelineStage upto)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        raise(errc::io_failure, "cannot create output directory: " + dir);

    write_text_file(dir + "/config_echo.json", config_to_json(rep.config));

    if (rep.config.source != ScenarioSource::ChannelFile)
        for (std::size_t u = 0; u < rep.scenarios.size(); ++u)
            save_scenario(rep.scenarios[u], dir + "/scenario_ue" + std::to_string(u) + ".json");

    if (upto == PipelineStage::Synth)
        for (std::size_t u = 0; u < rep.measured.size(); ++u)
            save_channel(rep.measured[u], dir + "/channel_ue" + std::to_string(u) + ".chx");

    if (at_least(upto, PipelineStage::Estimate))
        for (const auto &combo : rep.combos)
            for (std::size_t u = 0; u < combo.estimates.size(); ++u)
                write_text_file(dir + "/estimate_" + combo_tag(combo) + "_ue" + std::to_string(u) +
                                    ".json",
                                estimate_to_json(combo.estimates[u]));

    if (upto == PipelineStage::Extrapolate)
        for (const auto &combo : rep.combos)
            for (std::size_t u = 0; u < combo.recon.size(); ++u)
                save_channel(combo.recon[u],
                             dir + "/recon_" + combo_tag(combo) + "_ue" + std::to_string(u) +
                                 ".chx");

    if (at_least(upto, PipelineStage::Evaluate))
        for (const auto &combo : rep.combos)
            write_metrics_csv(dir + "/metrics_" + combo_tag(combo) + ".csv", combo.rows);

    if (upto == PipelineStage::Full)
        write_text_file(dir + "/summary.json", summary_json(rep).dump(2) + "\n");
}

} // namespace chx
