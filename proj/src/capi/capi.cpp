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

#include "chx/chx.h"

#include <cstring>
#include <new>
#include <string>

#include "common/error.hpp"
#include "core/channel_io.hpp"
#include "core/channel_matrix.hpp"
#include "array/pattern.hpp"
#include "harness/config.hpp"
#include "harness/pipeline.hpp"
#include "sage/sage.hpp"

struct chx_channel
{
    chx::ChannelMatrix cm;
};

struct chx_pattern
{
    chx::ArrayPattern pat;
};

struct chx_estimate
{
    chx::SageEstimate est;
};

namespace
{

thread_local std::string g_last_error;

int map_code(chx::errc c)
{
    switch (c)
    {
    case chx::errc::io_failure:
        return CHX_ERR_IO;
    case chx::errc::singular_gram:
    case chx::errc::division_guard:
    case chx::errc::zero_matrix:
    case chx::errc::zero_estimate:
    case chx::errc::zero_vector:
        return CHX_ERR_NUMERIC;
    default:
        return CHX_ERR_CONFIG;
    }
}

template <typename F> int guarded(F &&f)
{
    try
    {
        f();
        g_last_error.clear();
        return CHX_OK;
    }
    catch (const chx::error &e)
    {
        g_last_error = e.what();
        return map_code(e.code());
    }
    catch (const std::exception &e)
    {
        g_last_error = e.what();
        return CHX_ERR_INVALID;
    }
    catch (...)
    {
        g_last_error = "unknown failure";
        return CHX_ERR_INVALID;
    }
}

int invalid_argument(const char *what)
{
    g_last_error = what;
    return CHX_ERR_INVALID;
}

chx::FlagOverrides overrides_from(const chx_run_options &opt)
{
    chx::FlagOverrides fl;
    if (opt.has_seed)
        fl.seed = opt.seed;
    if (opt.model)
        fl.model = std::string(opt.model);
    if (opt.has_paths)
        fl.paths = opt.paths;
    if (opt.has_train_center)
        fl.train_center_hz = opt.train_center_hz;
    if (opt.has_train_width)
        fl.train_width_hz = opt.train_width_hz;
    if (opt.out_dir)
        fl.out_dir = std::string(opt.out_dir);
    return fl;
}

int run_command(const chx_run_options *opt, chx::PipelineStage upto)
{
    if (!opt)
        return invalid_argument("null options");
    return guarded([&] {
        std::optional<std::string> config_path;
        if (opt->config_path)
            config_path = std::string(opt->config_path);
        chx::ExperimentConfig cfg = chx::load_config(config_path, overrides_from(*opt));
        chx::ExperimentReport rep = chx::run_pipeline(cfg, upto);
        chx::emit_report(rep, cfg.out_dir, upto);
    });
}

} // namespace

extern "C"
{

const char *chx_last_error(void)
{
    return g_last_error.c_str();
}

int chx_channel_create(size_t m, size_t k, double f_start_hz, double spacing_hz, int stage,
                       const double *interleaved, chx_channel **out)
{
    if (!interleaved || !out)
        return invalid_argument("null argument");
    return guarded([&] {
        if (stage < 0 || stage > 2)
            chx::raise(chx::errc::config_invalid, "stage must be 0, 1 or 2");
        chx::FrequencyGrid grid(f_start_hz, spacing_hz, k);
        arma::cx_mat data(m, k);
        for (size_t mi = 0; mi < m; ++mi)
            for (size_t ki = 0; ki < k; ++ki)
            {
                const double *s = interleaved + 2 * (mi * k + ki);
                data(mi, ki) = {s[0], s[1]};
            }
        auto *h = new chx_channel{chx::ChannelMatrix(std::move(data), grid,
                                                     static_cast<chx::Stage>(stage))};
        *out = h;
    });
}

int chx_channel_load(const char *path, chx_channel **out)
{
    if (!path || !out)
        return invalid_argument("null argument");
    return guarded([&] { *out = new chx_channel{chx::load_channel(path)}; });
}

int chx_channel_save(const chx_channel *ch, const char *path)
{
    if (!ch || !path)
        return invalid_argument("null argument");
    return guarded([&] { chx::save_channel(ch->cm, path); });
}

int chx_channel_dims(const chx_channel *ch, size_t *m, size_t *k)
{
    if (!ch || !m || !k)
        return invalid_argument("null argument");
    *m = ch->cm.n_antennas();
    *k = ch->cm.n_freq();
    return CHX_OK;
}

int chx_channel_grid(const chx_channel *ch, double *f_start_hz, double *spacing_hz)
{
    if (!ch || !f_start_hz || !spacing_hz)
        return invalid_argument("null argument");
    *f_start_hz = ch->cm.grid.f_start;
    *spacing_hz = ch->cm.grid.spacing;
    return CHX_OK;
}

int chx_channel_stage(const chx_channel *ch, int *stage)
{
    if (!ch || !stage)
        return invalid_argument("null argument");
    *stage = int(ch->cm.stage);
    return CHX_OK;
}

int chx_channel_data(const chx_channel *ch, double *interleaved)
{
    if (!ch || !interleaved)
        return invalid_argument("null argument");
    size_t m = ch->cm.n_antennas(), k = ch->cm.n_freq();
    for (size_t mi = 0; mi < m; ++mi)
        for (size_t ki = 0; ki < k; ++ki)
        {
            std::complex<double> v = ch->cm.data(mi, ki);
            interleaved[2 * (mi * k + ki)] = v.real();
            interleaved[2 * (mi * k + ki) + 1] = v.imag();
        }
    return CHX_OK;
}

void chx_channel_free(chx_channel *ch)
{
    delete ch;
}

int chx_pattern_load(const char *path, chx_pattern **out)
{
    if (!path || !out)
        return invalid_argument("null argument");
    return guarded([&] { *out = new chx_pattern{chx::load_pattern(path)}; });
}

int chx_pattern_save(const chx_pattern *pat, const char *path)
{
    if (!pat || !path)
        return invalid_argument("null argument");
    return guarded([&] { chx::save_pattern(pat->pat, path); });
}

void chx_pattern_free(chx_pattern *pat)
{
    delete pat;
}

int chx_estimate_run(const chx_channel *training, const char *model, size_t l_paths,
                     size_t delay_bins, size_t max_cycles, double tolerance,
                     size_t refinement_levels, const chx_pattern *pattern, chx_estimate **out)
{
    if (!training || !model || !out)
        return invalid_argument("null argument");
    return guarded([&] {
        chx::SageConfig cfg;
        cfg.model = chx::sage_model_from_name(model);
        cfg.l_paths = l_paths;
        cfg.delay_grid = chx::DelayGrid::uniform_bins(delay_bins ? delay_bins : 4096);
        cfg.max_cycles = max_cycles ? max_cycles : 30;
        cfg.convergence_tol = tolerance > 0.0 ? tolerance : 1e-6;
        cfg.refinement_levels = refinement_levels;
        const chx::ArrayPattern *pat =
            cfg.model == chx::SageModel::Doa && pattern ? &pattern->pat : nullptr;
        *out = new chx_estimate{chx::sage_run(training->cm, cfg, pat)};
    });
}

int chx_estimate_to_json(const chx_estimate *est, char **json_out)
{
    if (!est || !json_out)
        return invalid_argument("null argument");
    return guarded([&] {
        std::string text = chx::estimate_to_json(est->est);
        char *buf = new char[text.size() + 1];
        std::memcpy(buf, text.c_str(), text.size() + 1);
        *json_out = buf;
    });
}

int chx_estimate_from_json(const char *json, chx_estimate **out)
{
    if (!json || !out)
        return invalid_argument("null argument");
    return guarded([&] { *out = new chx_estimate{chx::estimate_from_json(json)}; });
}

int chx_estimate_reconstruct(const chx_estimate *est, double f_start_hz, double spacing_hz,
                             size_t count, const chx_pattern *pattern, chx_channel **out)
{
    if (!est || !out)
        return invalid_argument("null argument");
    return guarded([&] {
        chx::FrequencyGrid grid(f_start_hz, spacing_hz, count);
        *out = new chx_channel{
            chx::reconstruct_grid(est->est, grid, pattern ? &pattern->pat : nullptr)};
    });
}

void chx_estimate_free(chx_estimate *est)
{
    delete est;
}

void chx_string_free(char *s)
{
    delete[] s;
}

int chx_cmd_synth(const chx_run_options *opt)
{
    return run_command(opt, chx::PipelineStage::Synth);
}

int chx_cmd_estimate(const chx_run_options *opt)
{
    return run_command(opt, chx::PipelineStage::Estimate);
}

int chx_cmd_extrapolate(const chx_run_options *opt)
{
    return run_command(opt, chx::PipelineStage::Extrapolate);
}

int chx_cmd_evaluate(const chx_run_options *opt)
{
    return run_command(opt, chx::PipelineStage::Evaluate);
}

int chx_cmd_pipeline(const chx_run_options *opt)
{
    return run_command(opt, chx::PipelineStage::Full);
}

} // extern "C"
