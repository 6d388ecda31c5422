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

#ifndef chx_synth_synthesis_H
#define chx_synth_synthesis_H

#include <cstdint>
#include <string>
#include <vector>

#include "array/pattern.hpp"
#include "core/channel_matrix.hpp"
#include "synth/mpc.hpp"

namespace chx
{

class rng;

// Angular region planted paths are drawn from. Azimuth wraps during lookup,
// so only the elevation bounds have to respect the pattern hull.
struct AngleHull
{
    double az_lo = -3.14159265358979323846;
    double az_hi = 3.14159265358979323846;
    double el_lo = -1.04719755119659774615; // -60 deg
    double el_hi = 1.04719755119659774615;  // +60 deg
};

// Planted ground-truth scenario: the paths, the geometry it was drawn for,
// and the seed that generated it.
struct Scenario
{
    std::string name;
    std::uint64_t seed = 0;
    std::vector<MpcDoa> paths;
    std::string geometry_preset;
    std::uint32_t ue_id = 0;
};

enum class ScenarioKind
{
    LosDominant,
    Olos,
    NlosRich
};

// Ground-truth channel from planted paths, column k of the result being
// sum_d alpha_d * pattern(phi_d, theta_d, f_k) * exp(-j 2 pi f_k tau_d).
// Kept independent of the estimator-side reconstruction so either can act
// as the oracle for the other.
ChannelMatrix synth_channel_doa(const std::vector<MpcDoa> &paths, const ArrayPattern &pattern,
                                const FrequencyGrid &grid);

// Ground truth for the vector-spatial-signature model: column k is
// sum_v a_vec_v * exp(-j 2 pi f_k tau_v).
ChannelMatrix synth_channel_vss(const std::vector<MpcVss> &paths, const FrequencyGrid &grid);

// Adds circularly-symmetric complex Gaussian noise with per-sample variance
// mean(|h|^2) * 10^(-snr_db/10). snr_db = +infinity is the noiseless flag.
ChannelMatrix add_noise(const ChannelMatrix &h, double snr_db, std::uint64_t seed);

// Path-set generators behind the presets, exposed so experiments can pin the
// path count while keeping the same statistics. Delays uniform on [0, 1 us],
// angles uniform over the hull.
std::vector<MpcDoa> draw_los_paths(rng &gen, const AngleHull &hull);
std::vector<MpcDoa> draw_olos_paths(rng &gen, const AngleHull &hull);
std::vector<MpcDoa> draw_nlos_paths(rng &gen, std::size_t count, const AngleHull &hull);

// Deterministic per seed. LosDominant: one unit path plus 2..4 paths at
// least 10 dB weaker. Olos: 3..6 comparable paths. NlosRich: 15..25 paths
// with an exponentially decaying power profile.
Scenario scenario_preset(ScenarioKind kind, std::size_t m, std::uint64_t seed,
                         const AngleHull &hull = AngleHull{});

ScenarioKind scenario_kind_from_name(const std::string &name);
std::string scenario_kind_name(ScenarioKind kind);

// Scenario JSON: {name, seed, paths:[{alpha_re, alpha_im, tau_s, phi_rad,
// theta_rad}], geometry_preset}. Doubles survive the round trip exactly.
std::string scenario_to_json(const Scenario &sc);
Scenario scenario_from_json(const std::string &text);
void save_scenario(const Scenario &sc, const std::string &path);
Scenario load_scenario(const std::string &path);

} // namespace chx

#endif
