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

#ifndef chx_harness_pipeline_H
#define chx_harness_pipeline_H

#include <string>
#include <vector>

#include "harness/config.hpp"
#include "metrics/metrics.hpp"
#include "sage/sage.hpp"

namespace chx
{

// How far the run goes; each stage implies the ones before it.
enum class PipelineStage
{
    Synth,
    Estimate,
    Extrapolate,
    Evaluate,
    Full
};

struct ComboResult
{
    SageModel model = SageModel::Vss;
    std::size_t l_paths = 1;
    std::vector<SageEstimate> estimates; // per UE
    std::vector<ChannelMatrix> recon;    // per UE, full grid; kept for the extrapolate verb
    std::vector<MetricsRow> rows;        // frequency-major, UE-minor
};

struct StageTiming
{
    std::string stage;
    double seconds = 0.0;
};

struct ExperimentReport
{
    ExperimentConfig config;
    TrainingBand band;
    std::vector<Scenario> scenarios;         // per UE (empty for channel-file input)
    std::vector<ChannelMatrix> measured;     // per UE, full grid, measurement scale
    std::vector<ChannelMatrix> truth_scaled; // per UE, normalized scale
    std::vector<double> mu;                  // per-UE normalization constants
    std::vector<ComboResult> combos;         // one per (model, L)
    std::vector<StageTiming> timings;
};

// Executes synthesize -> normalize -> slice training band -> estimate ->
// extrapolate -> score, stopping after `upto`. Deterministic for a fixed
// config and seed, independent of CHX_THREADS.
ExperimentReport run_pipeline(const ExperimentConfig &cfg, PipelineStage upto = PipelineStage::Full);

// Writes the artifacts the completed stages produced into dir: config echo
// and scenario JSONs always, channel containers for Synth, estimate JSONs
// for Estimate, reconstruction containers for Extrapolate, metric CSVs for
// Evaluate, and a summary JSON (band-offset efficiency statistics, estimator
// diagnostics, stage timings) for Full.
void emit_report(const ExperimentReport &rep, const std::string &dir,
                 PipelineStage upto = PipelineStage::Full);

} // namespace chx

#endif
