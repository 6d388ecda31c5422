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

#include "harness/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "common/error.hpp"
#include "json.hpp"

namespace chx
{

SageModel sage_model_from_name(const std::string &name)
{
    if (name == "vss")
        return SageModel::Vss;
    if (name == "doa")
        return SageModel::Doa;
    raise(errc::config_invalid, "unknown model '" + name + "' (expected vss or doa)");
}

std::string sage_model_name(SageModel model)
{
    return model == SageModel::Vss ? "vss" : "doa";
}

void ExperimentConfig::validate() const
{
    if (ue_count < 1)
        raise(errc::config_invalid, "ue_count must be >= 1");
    if (models.empty())
        raise(errc::config_invalid, "at least one model required");
    if (l_sweep.empty())
        raise(errc::config_invalid, "l_sweep must not be empty");
    for (std::size_t l : l_sweep)
        if (l < 1)
            raise(errc::config_invalid, "path counts must be >= 1");

    if (source != ScenarioSource::Preset && ue_count != 1)
        raise(errc::config_invalid, "multiple UEs require a scenario preset");
    if (source == ScenarioSource::File && !std::filesystem::exists(scenario_file))
        raise(errc::config_invalid, "scenario file does not exist: " + scenario_file);
    if (source == ScenarioSource::ChannelFile && !std::filesystem::exists(channel_file))
        raise(errc::config_invalid, "channel file does not exist: " + channel_file);
    if (source == ScenarioSource::Inline && inline_scenario.paths.empty())
        raise(errc::config_invalid, "inline scenario has no paths");

    if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity())
        raise(errc::config_invalid, "snr_db must be finite or +inf (noiseless)");
    link.validate();

    std::set<std::size_t> seen;
    for (const auto &g : mu_groups)
    {
        if (g.empty())
            raise(errc::config_invalid, "empty multiuser group");
        for (std::size_t u : g)
        {
            if (u >= ue_count)
                raise(errc::config_invalid, "multiuser group references unknown UE");
            if (!seen.insert(u).second)
                raise(errc::config_invalid, "UE appears in more than one multiuser group");
        }
    }

    if (sage.max_cycles < 1)
        raise(errc::config_invalid, "sage.max_cycles must be >= 1");
    if (!(sage.convergence_tol > 0.0))
        raise(errc::config_invalid, "sage.convergence_tol must be positive");
    if (sage.delay_bins < 1)
        raise(errc::config_invalid, "sage.delay_bins must be >= 1");

    if (calibration.n_az < 2 || calibration.n_el < 2 || calibration.freq_points < 2)
        raise(errc::config_invalid, "calibration grid needs >= 2 nodes per axis");
    if (!(calibration.el_lo < calibration.el_hi))
        raise(errc::config_invalid, "calibration elevation range is empty");

    TrainingBand::from_center(grid, train_center_hz, train_width_hz).validate_against(grid);

    if (out_dir.empty())
        raise(errc::config_invalid, "out_dir must not be empty");
}

namespace
{

void apply_json(const nlohmann::json &j, ExperimentConfig &cfg)
{
    if (j.contains("name"))
        cfg.name = j.at("name").get<std::string>();
    if (j.contains("seed"))
        cfg.seed = j.at("seed").get<std::uint64_t>();

    if (j.contains("scenario"))
    {
        const auto &s = j.at("scenario");
        int sources = int(s.contains("preset")) + int(s.contains("file")) +
                      int(s.contains("paths")) + int(s.contains("channel_file"));
        if (sources != 1)
            raise(errc::config_invalid,
                  "scenario needs exactly one of preset, file, paths, channel_file");
        if (s.contains("preset"))
        {
            cfg.source = ScenarioSource::Preset;
            cfg.preset = scenario_kind_from_name(s.at("preset").get<std::string>());
        }
        else if (s.contains("file"))
        {
            cfg.source = ScenarioSource::File;
            cfg.scenario_file = s.at("file").get<std::string>();
        }
        else if (s.contains("channel_file"))
        {
            cfg.source = ScenarioSource::ChannelFile;
            cfg.channel_file = s.at("channel_file").get<std::string>();
        }
        else
        {
            cfg.source = ScenarioSource::Inline;
            cfg.inline_scenario = scenario_from_json(s.dump());
        }
    }

    if (j.contains("geometry_preset"))
        cfg.geometry = j.at("geometry_preset").get<std::string>();

    if (j.contains("grid"))
    {
        const auto &g = j.at("grid");
        cfg.grid = FrequencyGrid(g.at("f_start_hz").get<double>(),
                                 g.at("spacing_hz").get<double>(),
                                 g.at("count").get<std::size_t>());
    }

    if (j.contains("train_center_hz"))
        cfg.train_center_hz = j.at("train_center_hz").get<double>();
    if (j.contains("train_width_hz"))
        cfg.train_width_hz = j.at("train_width_hz").get<double>();

    if (j.contains("models"))
    {
        cfg.models.clear();
        for (const auto &m : j.at("models"))
            cfg.models.push_back(sage_model_from_name(m.get<std::string>()));
    }
    if (j.contains("l_sweep"))
    {
        cfg.l_sweep.clear();
        for (const auto &l : j.at("l_sweep"))
            cfg.l_sweep.push_back(l.get<std::size_t>());
    }

    if (j.contains("snr_db"))
    {
        if (j.at("snr_db").is_null())
            cfg.snr_db = std::numeric_limits<double>::infinity();
        else
            cfg.snr_db = j.at("snr_db").get<double>();
    }

    if (j.contains("ue_count"))
        cfg.ue_count = j.at("ue_count").get<std::size_t>();
    if (j.contains("mu_groups"))
    {
        cfg.mu_groups.clear();
        for (const auto &g : j.at("mu_groups"))
            cfg.mu_groups.push_back(g.get<std::vector<std::size_t>>());
    }
    if (j.contains("tx_snr_db"))
        cfg.link.tx_snr_db = j.at("tx_snr_db").get<double>();

    if (j.contains("out_dir"))
        cfg.out_dir = j.at("out_dir").get<std::string>();

    if (j.contains("sage"))
    {
        const auto &s = j.at("sage");
        if (s.contains("max_cycles"))
            cfg.sage.max_cycles = s.at("max_cycles").get<std::size_t>();
        if (s.contains("convergence_tol"))
            cfg.sage.convergence_tol = s.at("convergence_tol").get<double>();
        if (s.contains("delay_bins"))
            cfg.sage.delay_bins = s.at("delay_bins").get<std::size_t>();
        if (s.contains("refinement_levels"))
            cfg.sage.refinement_levels = s.at("refinement_levels").get<std::size_t>();
    }

    if (j.contains("calibration"))
    {
        const auto &c = j.at("calibration");
        if (c.contains("n_az"))
            cfg.calibration.n_az = c.at("n_az").get<std::size_t>();
        if (c.contains("n_el"))
            cfg.calibration.n_el = c.at("n_el").get<std::size_t>();
        if (c.contains("el_lo_rad"))
            cfg.calibration.el_lo = c.at("el_lo_rad").get<double>();
        if (c.contains("el_hi_rad"))
            cfg.calibration.el_hi = c.at("el_hi_rad").get<double>();
        if (c.contains("freq_points"))
            cfg.calibration.freq_points = c.at("freq_points").get<std::size_t>();
    }
}

} // namespace

ExperimentConfig config_from_json(const std::string &text)
{
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(text);
    }
    catch (const std::exception &e)
    {
        raise(errc::config_invalid, std::string("config JSON parse failure: ") + e.what());
    }

    ExperimentConfig cfg;
    try
    {
        apply_json(j, cfg);
    }
    catch (const nlohmann::json::exception &e)
    {
        raise(errc::config_invalid, std::string("config field error: ") + e.what());
    }
    return cfg;
}

std::string config_to_json(const ExperimentConfig &cfg)
{
    nlohmann::json j;
    j["name"] = cfg.name;
    j["seed"] = cfg.seed;

    nlohmann::json s;
    switch (cfg.source)
    {
    case ScenarioSource::Preset:
        s["preset"] = scenario_kind_name(cfg.preset);
        break;
    case ScenarioSource::File:
        s["file"] = cfg.scenario_file;
        break;
    case ScenarioSource::ChannelFile:
        s["channel_file"] = cfg.channel_file;
        break;
    case ScenarioSource::Inline:
        s = nlohmann::json::parse(scenario_to_json(cfg.inline_scenario));
        break;
    }
    j["scenario"] = s;

    j["geometry_preset"] = cfg.geometry;
    j["grid"] = {{"f_start_hz", cfg.grid.f_start},
                 {"spacing_hz", cfg.grid.spacing},
                 {"count", cfg.grid.count}};
    j["train_center_hz"] = cfg.train_center_hz;
    j["train_width_hz"] = cfg.train_width_hz;

    j["models"] = nlohmann::json::array();
    for (SageModel m : cfg.models)
        j["models"].push_back(sage_model_name(m));
    j["l_sweep"] = cfg.l_sweep;

    if (std::isinf(cfg.snr_db))
        j["snr_db"] = nullptr;
    else
        j["snr_db"] = cfg.snr_db;

    j["ue_count"] = cfg.ue_count;
    j["mu_groups"] = cfg.mu_groups;
    j["tx_snr_db"] = cfg.link.tx_snr_db;
    j["out_dir"] = cfg.out_dir;

    j["sage"] = {{"max_cycles", cfg.sage.max_cycles},
                 {"convergence_tol", cfg.sage.convergence_tol},
                 {"delay_bins", cfg.sage.delay_bins},
                 {"refinement_levels", cfg.sage.refinement_levels}};
    j["calibration"] = {{"n_az", cfg.calibration.n_az},
                        {"n_el", cfg.calibration.n_el},
                        {"el_lo_rad", cfg.calibration.el_lo},
                        {"el_hi_rad", cfg.calibration.el_hi},
                        {"freq_points", cfg.calibration.freq_points}};
    return j.dump(2) + "\n";
}

ExperimentConfig load_config(const std::optional<std::string> &config_path,
                             const FlagOverrides &flags)
{
    ExperimentConfig cfg;

    if (flags.seed)
        cfg.seed = *flags.seed;
    if (flags.model)
        cfg.models = {sage_model_from_name(*flags.model)};
    if (flags.paths)
        cfg.l_sweep = {*flags.paths};
    if (flags.train_center_hz)
        cfg.train_center_hz = *flags.train_center_hz;
    if (flags.train_width_hz)
        cfg.train_width_hz = *flags.train_width_hz;
    if (flags.out_dir)
        cfg.out_dir = *flags.out_dir;

    if (config_path)
    {
        std::ifstream in(*config_path);
        if (!in)
            raise(errc::io_failure, "cannot open config: " + *config_path);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

        nlohmann::json j;
        try
        {
            j = nlohmann::json::parse(text);
        }
        catch (const std::exception &e)
        {
            raise(errc::config_invalid, std::string("config JSON parse failure: ") + e.what());
        }
        try
        {
            apply_json(j, cfg);
        }
        catch (const nlohmann::json::exception &e)
        {
            raise(errc::config_invalid, std::string("config field error: ") + e.what());
        }
    }

    if (flags.seed)
        cfg.seed = *flags.seed;

    cfg.validate();
    return cfg;
}

} // namespace chx
