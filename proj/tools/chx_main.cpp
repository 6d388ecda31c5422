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

#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"

#include "chx/chx.h"

namespace
{

struct CommonArgs
{
    std::string config;
    std::uint64_t seed = 0;
    std::string model;
    std::size_t paths = 0;
    double train_center_hz = 0.0;
    double train_width_hz = 0.0;
    std::string out_dir;
};

void add_common(CLI::App *sub, CommonArgs &args)
{
    sub->add_option("--config", args.config, "experiment config JSON file");
    sub->add_option("--seed", args.seed, "master seed (always wins, even over the config)");
    sub->add_option("--model", args.model, "estimation model: vss or doa");
    sub->add_option("--paths", args.paths, "number of paths L");
    sub->add_option("--train-center-hz", args.train_center_hz, "training band center frequency");
    sub->add_option("--train-width-hz", args.train_width_hz, "training band width");
    sub->add_option("--out", args.out_dir, "output directory");
}

chx_run_options to_options(const CLI::App *sub, const CommonArgs &args)
{
    chx_run_options opt{};
    opt.config_path = sub->count("--config") ? args.config.c_str() : nullptr;
    opt.has_seed = sub->count("--seed") > 0;
    opt.seed = args.seed;
    opt.model = sub->count("--model") ? args.model.c_str() : nullptr;
    opt.has_paths = sub->count("--paths") > 0;
    opt.paths = args.paths;
    opt.has_train_center = sub->count("--train-center-hz") > 0;
    opt.train_center_hz = args.train_center_hz;
    opt.has_train_width = sub->count("--train-width-hz") > 0;
    opt.train_width_hz = args.train_width_hz;
    opt.out_dir = sub->count("--out") ? args.out_dir.c_str() : nullptr;
    return opt;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"chx: multipath parameter estimation and channel extrapolation"};
    app.require_subcommand(1);

    CommonArgs args;
    CLI::App *synth = app.add_subcommand("synth", "synthesize measurement channels");
    CLI::App *estimate = app.add_subcommand("estimate", "fit multipath parameters");
    CLI::App *extrapolate =
        app.add_subcommand("extrapolate", "reconstruct the channel over the full band");
    CLI::App *evaluate = app.add_subcommand("evaluate", "score reconstructions against truth");
    CLI::App *pipeline = app.add_subcommand("pipeline", "full run including the summary report");
    for (CLI::App *sub : {synth, estimate, extrapolate, evaluate, pipeline})
        add_common(sub, args);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return CHX_ERR_CONFIG;
    }

    const CLI::App *sub = app.get_subcommands().front();
    chx_run_options opt = to_options(sub, args);

    int rc;
    if (sub == synth)
        rc = chx_cmd_synth(&opt);
    else if (sub == estimate)
        rc = chx_cmd_estimate(&opt);
    else if (sub == extrapolate)
        rc = chx_cmd_extrapolate(&opt);
    else if (sub == evaluate)
        rc = chx_cmd_evaluate(&opt);
    else
        rc = chx_cmd_pipeline(&opt);

    if (rc != CHX_OK)
        std::fprintf(stderr, "chx: %s\n", chx_last_error());
    return rc;
}
