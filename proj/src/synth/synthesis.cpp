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

#include "synth/synthesis.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"

#include "common/binary_io.hpp"
#include "common/parallel.hpp"
#include "common/rng.hpp"

namespace chx
{

static constexpr double two_pi = 6.28318530717958647692;

ChannelMatrix synth_channel_doa(const std::vector<MpcDoa> &paths, const ArrayPattern &pattern,
                                const FrequencyGrid &grid)
{
    for (const auto &p : paths)
        p.validate();

    std::size_t m_count = pattern.m_count;
    arma::cx_mat data(m_count, grid.count, arma::fill::zeros);

    parallel_for(grid.count, [&](std::size_t k) {
        double f = grid.frequency(k);
        std::vector<std::complex<double>> a(m_count);
        for (const auto &p : paths)
        {
            pattern_lookup_into(pattern, p.phi, p.theta, f, a.data());
            std::complex<double> rot = p.alpha * std::polar(1.0, -two_pi * f * p.tau);
            for (std::size_t m = 0; m < m_count; ++m)
                data(m, k) += rot * a[m];
        }
    });

    return ChannelMatrix(std::move(data), grid, Stage::Compensated);
}

ChannelMatrix synth_channel_vss(const std::vector<MpcVss> &paths, const FrequencyGrid &grid)
{
    if (paths.empty())
        raise(errc::grid_empty, "path list is empty");
    std::size_t m_count = paths.front().a_vec.n_elem;
    for (const auto &p : paths)
    {
        p.validate();
        if (p.a_vec.n_elem != m_count)
            raise(errc::dimension_mismatch, "spatial signatures differ in length");
    }

    arma::cx_mat data(m_count, grid.count, arma::fill::zeros);
    parallel_for(grid.count, [&](std::size_t k) {
        double f = grid.frequency(k);
        for (const auto &p : paths)
        {
            std::complex<double> rot = std::polar(1.0, -two_pi * f * p.tau);
            for (std::size_t m = 0; m < m_count; ++m)
                data(m, k) += rot * p.a_vec[m];
        }
    });

    return ChannelMatrix(std::move(data), grid, Stage::Compensated);
}

ChannelMatrix add_noise(const ChannelMatrix &h, double snr_db, std::uint64_t seed)
{
    if (std::isinf(snr_db) && snr_db > 0.0)
        return h;
    if (!std::isfinite(snr_db))
        raise(errc::config_invalid, "snr_db must be finite or +inf (noiseless)");

    double mean_power = 0.0;
    for (const auto &v : h.data)
        mean_power += std::norm(v);
    mean_power /= double(h.data.n_elem);

    double sigma = std::sqrt(mean_power * std::pow(10.0, -snr_db / 10.0));

    arma::cx_mat out = h.data;
    rng gen(seed);
    for (std::size_t k = 0; k < out.n_cols; ++k)
        for (std::size_t m = 0; m < out.n_rows; ++m)
            out(m, k) += sigma * gen.cnormal();

    return ChannelMatrix(std::move(out), h.grid, h.stage);
}

namespace
{

double draw_angle(rng &gen, double lo, double hi)
{
    return gen.uniform(lo, hi);
}

MpcDoa draw_path(rng &gen, const AngleHull &hull, double amplitude)
{
    MpcDoa p;
    p.tau = gen.uniform(0.0, 1e-6);
    p.phi = draw_angle(gen, hull.az_lo, hull.az_hi);
    p.theta = draw_angle(gen, hull.el_lo, hull.el_hi);
    p.alpha = std::polar(amplitude, gen.uniform(0.0, two_pi));
    return p;
}

} // namespace

std::vector<MpcDoa> draw_los_paths(rng &gen, const AngleHull &hull)
{
    std::vector<MpcDoa> paths;
    paths.push_back(draw_path(gen, hull, 1.0));

    std::size_t weak = std::size_t(gen.uniform_int(2, 4));
    for (std::size_t i = 0; i < weak; ++i)
    {
        double power_db = gen.uniform(-28.0, -13.0);
        paths.push_back(draw_path(gen, hull, std::pow(10.0, power_db / 20.0)));
    }
    return paths;
}

std::vector<MpcDoa> draw_olos_paths(rng &gen, const AngleHull &hull)
{
    std::size_t count = std::size_t(gen.uniform_int(3, 6));
    std::vector<MpcDoa> paths;
    for (std::size_t i = 0; i < count; ++i)
    {
        double power_db = gen.uniform(-3.0, 0.0);
        paths.push_back(draw_path(gen, hull, std::pow(10.0, power_db / 20.0)));
    }
    return paths;
}

std::vector<MpcDoa> draw_nlos_paths(rng &gen, std::size_t count, const AngleHull &hull)
{
    // Exponential power decay over delay (150 ns constant) with a few dB of
    // per-path shadowing, normalized to unit total power.
    constexpr double decay_s = 150e-9;

    std::vector<MpcDoa> paths;
    std::vector<double> weights;
    double total = 0.0;
    for (std::size_t i = 0; i < count; ++i)
    {
        MpcDoa p = draw_path(gen, hull, 1.0);
        double w = std::exp(-p.tau / decay_s) * std::pow(10.0, gen.uniform(-3.0, 3.0) / 10.0);
        weights.push_back(w);
        total += w;
        paths.push_back(p);
    }
    for (std::size_t i = 0; i < count; ++i)
        paths[i].alpha *= std::sqrt(weights[i] / total);
    return paths;
}

Scenario scenario_preset(ScenarioKind kind, std::size_t m, std::uint64_t seed, const AngleHull &hull)
{
    if (m < 1)
        raise(errc::config_invalid, "scenario antenna count must be >= 1");

    rng gen(derive_seed(seed, 0x5CE11A5ULL));
    Scenario sc;
    sc.name = scenario_kind_name(kind);
    sc.seed = seed;

    switch (kind)
    {
    case ScenarioKind::LosDominant:
        sc.paths = draw_los_paths(gen, hull);
        break;
    case ScenarioKind::Olos:
        sc.paths = draw_olos_paths(gen, hull);
        break;
    case ScenarioKind::NlosRich:
        sc.paths = draw_nlos_paths(gen, std::size_t(gen.uniform_int(15, 25)), hull);
        break;
    }

    if (m == 1)
        sc.geometry_preset = "single";
    else if (m == 64)
        sc.geometry_preset = "cylinder64";
    else
        sc.geometry_preset = "ring" + std::to_string(m);
    return sc;
}

ScenarioKind scenario_kind_from_name(const std::string &name)
{
    if (name == "LosDominant")
        return ScenarioKind::LosDominant;
    if (name == "Olos")
        return ScenarioKind::Olos;
    if (name == "NlosRich")
        return ScenarioKind::NlosRich;
    raise(errc::config_invalid, "unknown scenario preset: " + name);
}

std::string scenario_kind_name(ScenarioKind kind)
{
    switch (kind)
    {
    case ScenarioKind::LosDominant:
        return "LosDominant";
    case ScenarioKind::Olos:
        return "Olos";
    case ScenarioKind::NlosRich:
        return "NlosRich";
    }
    return "";
}

std::string scenario_to_json(const Scenario &sc)
{
    nlohmann::json j;
    j["name"] = sc.name;
    j["seed"] = sc.seed;
    j["geometry_preset"] = sc.geometry_preset;
    j["paths"] = nlohmann::json::array();
    for (const auto &p : sc.paths)
        j["paths"].push_back({{"alpha_re", p.alpha.real()},
                              {"alpha_im", p.alpha.imag()},
                              {"tau_s", p.tau},
                              {"phi_rad", p.phi},
                              {"theta_rad", p.theta}});
    return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string &text)
{
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(text);
    }
    catch (const std::exception &e)
    {
        raise(errc::config_invalid, std::string("scenario JSON parse failure: ") + e.what());
    }

    Scenario sc;
    try
    {
        sc.name = j.at("name").get<std::string>();
        sc.seed = j.at("seed").get<std::uint64_t>();
        sc.geometry_preset = j.value("geometry_preset", std::string{});
        for (const auto &jp : j.at("paths"))
        {
            MpcDoa p;
            p.alpha = {jp.at("alpha_re").get<double>(), jp.at("alpha_im").get<double>()};
            p.tau = jp.at("tau_s").get<double>();
            p.phi = jp.at("phi_rad").get<double>();
            p.theta = jp.at("theta_rad").get<double>();
            p.validate();
            sc.paths.push_back(p);
        }
    }
    catch (const nlohmann::json::exception &e)
    {
        raise(errc::config_invalid, std::string("scenario JSON missing field: ") + e.what());
    }
    if (sc.paths.empty())
        raise(errc::config_invalid, "scenario has no paths");
    return sc;
}

void save_scenario(const Scenario &sc, const std::string &path)
{
    write_text_file(path, scenario_to_json(sc));
}

Scenario load_scenario(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        raise(errc::io_failure, "cannot open for reading: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return scenario_from_json(text);
}

} // namespace chx
