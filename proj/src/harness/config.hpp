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

#ifndef chx_harness_config_H
#define chx_harness_config_H

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "core/frequency_grid.hpp"
#include "metrics/metrics.hpp"
#include "sage/sage.hpp"
#include "synth/synthesis.hpp"

namespace chx
{

struct SageSettings
{
    std::size_t max_cycles = 30;
    double convergence_tol = 1e-6;
    std::size_t delay_bins = 4096;
    std::size_t refinement_levels = 2;
};

// Grid for the synthesized array calibration: azimuth nodes uniform over
// the full circle (no duplicate endpoint), elevation and frequency nodes
// uniform over closed intervals. The frequency nodes must cover the
// measurement grid; the defaults span it exactly.
struct CalibrationSettings
{
    std::size_t n_az = 72;
    std::size_t n_el = 13;
    double el_lo = -1.04719755119659774615;
    double el_hi = 1.04719755119659774615;
    std::size_t freq_points = 36;
};

enum class ScenarioSource
{
    Preset,
    File,
    Inline,
    ChannelFile
};

struct ExperimentConfig
{
    std::string name = "chx-run";
    std::uint64_t seed = 1;

    ScenarioSource source = ScenarioSource::Preset;
    ScenarioKind preset = ScenarioKind::LosDominant;
    std::string scenario_file;
    Scenario inline_scenario;
    std::string channel_file;

    std::string geometry = "cylinder64";
    FrequencyGrid grid{3.325e9, 125e3, 2801};
    double train_center_hz = 3.5e9;
    double train_width_hz = 35e6;

    std::vector<SageModel> models{SageModel::Vss};
    std::vector<std::size_t> l_sweep{1};

    double snr_db = std::numeric_limits<double>::infinity(); // +inf = noiseless
    std::size_t ue_count = 1;
    std::vector<std::vector<std::size_t>> mu_groups; // UEs not listed run alone
    LinkBudget link{100.0};

    std::string out_dir = "chx-out";
    SageSettings sage;
    CalibrationSettings calibration;

    void validate() const;
};

// Command-line values; a config file overrides all of them except the seed.
struct FlagOverrides
{
    std::optional<std::uint64_t> seed;
    std::optional<std::string> model;
    std::optional<std::size_t> paths;
    std::optional<double> train_center_hz;
    std::optional<double> train_width_hz;
    std::optional<std::string> out_dir;
};

SageModel sage_model_from_name(const std::string &name);
std::string sage_model_name(SageModel model);

ExperimentConfig config_from_json(const std::string &text);
std::string config_to_json(const ExperimentConfig &cfg);

// Defaults, then flags, then the config file (if given), then --seed again.
ExperimentConfig load_config(const std::optional<std::string> &config_path,
                             const FlagOverrides &flags);

} // namespace chx

#endif
