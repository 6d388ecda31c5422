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

#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstdio>
#include <unistd.h>

#include "array/pattern.hpp"
#include "common/error.hpp"
#include "common/rng.hpp"
#include "synth/synthesis.hpp"

using namespace chx;

namespace
{

constexpr double pi = 3.14159265358979323846;
constexpr double two_pi = 2.0 * pi;

arma::vec az_circle(std::size_t n)
{
    arma::vec v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = -pi + two_pi * double(i) / double(n);
    return v;
}

arma::vec linspace_closed(double lo, double hi, std::size_t n)
{
    arma::vec v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * double(i) / double(n - 1);
    return v;
}

ArrayPattern test_pattern(const ArrayGeometry &geom, const FrequencyGrid &grid)
{
    // Calibration grids comfortably covering the hull used by the tests.
    return synth_calibration(geom, az_circle(36), linspace_closed(-1.1, 1.1, 9),
                             FrequencyGrid(grid.f_start - grid.spacing,
                                           (grid.f_end() - grid.f_start + 2.0 * grid.spacing) / 7.0,
                                           8));
}

} // namespace

TEST_CASE("direction-model synthesis matches a naive per-sample evaluation")
{
    ArrayGeometry geom = make_ring_array(4, 0.043);
    FrequencyGrid grid(3.4e9, 20e6, 6);
    ArrayPattern pat = test_pattern(geom, grid);

    rng gen(91);
    std::vector<MpcDoa> paths(3);
    for (auto &p : paths)
    {
        p.alpha = gen.cnormal();
        p.tau = gen.uniform(0.0, 300e-9);
        p.phi = gen.uniform(-pi, pi);
        p.theta = gen.uniform(-0.9, 0.9);
    }

    ChannelMatrix h = synth_channel_doa(paths, pat, grid);
    CHECK(h.stage == Stage::Compensated);
    REQUIRE(h.n_antennas() == 4);
    REQUIRE(h.n_freq() == 6);

    for (std::size_t k = 0; k < 6; ++k)
    {
        double f = grid.frequency(k);
        for (std::size_t m = 0; m < 4; ++m)
        {
            std::complex<double> expect{0.0, 0.0};
            for (const auto &p : paths)
            {
                arma::cx_vec a = pattern_lookup(pat, p.phi, p.theta, f);
                expect += p.alpha * a[m] *
                          std::complex<double>(std::cos(two_pi * f * p.tau),
                                               -std::sin(two_pi * f * p.tau));
            }
            CHECK(std::abs(h.data(m, k) - expect) < 1e-12);
        }
    }
}

TEST_CASE("signature-model synthesis matches a naive per-sample evaluation")
{
    FrequencyGrid grid(3.48e9, 5e6, 9);
    rng gen(17);
    std::vector<MpcVss> paths(4);
    for (auto &p : paths)
    {
        p.a_vec.set_size(3);
        for (auto &v : p.a_vec)
            v = gen.cnormal();
        p.tau = gen.uniform(0.0, 500e-9);
    }

    ChannelMatrix h = synth_channel_vss(paths, grid);
    REQUIRE(h.n_antennas() == 3);
    for (std::size_t k = 0; k < 9; ++k)
    {
        double f = grid.frequency(k);
        for (std::size_t m = 0; m < 3; ++m)
        {
            std::complex<double> expect{0.0, 0.0};
            for (const auto &p : paths)
                expect += p.a_vec[m] * std::complex<double>(std::cos(two_pi * f * p.tau),
                                                            -std::sin(two_pi * f * p.tau));
            CHECK(std::abs(h.data(m, k) - expect) < 1e-12);
        }
    }
}

TEST_CASE("two identical opposite-sign paths cancel exactly")
{
    FrequencyGrid grid(3.5e9, 1e6, 5);
    MpcVss a;
    a.a_vec = arma::cx_vec{{1.0, 2.0}, {-0.5, 0.25}};
    a.tau = 120e-9;
    MpcVss b = a;
    b.a_vec = -b.a_vec;

    ChannelMatrix h = synth_channel_vss({a, b}, grid);
    CHECK(arma::abs(h.data).max() < 1e-15);
}

TEST_CASE("zero delay gives a frequency-flat channel")
{
    FrequencyGrid grid(3.3e9, 50e6, 7);
    MpcVss p;
    p.a_vec = arma::cx_vec{{0.3, -1.2}, {2.0, 0.7}, {0.0, 1.0}};
    p.tau = 0.0;

    ChannelMatrix h = synth_channel_vss({p}, grid);
    for (std::size_t k = 0; k < 7; ++k)
        CHECK(arma::abs(h.data.col(k) - p.a_vec).max() < 1e-15);
}

TEST_CASE("delay equal to the inverse spacing aliases onto zero delay")
{
    // exp(-j 2 pi f_k / spacing) has the same value at every grid node up to
    // a constant phase, so tau = 1/spacing is indistinguishable from tau = 0
    // on the grid apart from that constant rotation.
    FrequencyGrid grid(3.5e9, 125e3, 11);
    MpcVss p0, p1;
    p0.a_vec = arma::cx_vec{{1.0, 0.0}};
    p0.tau = 0.0;
    p1.a_vec = p0.a_vec;
    p1.tau = 1.0 / grid.spacing;

    ChannelMatrix h0 = synth_channel_vss({p0}, grid);
    ChannelMatrix h1 = synth_channel_vss({p1}, grid);

    std::complex<double> rot = h1.data(0, 0) / h0.data(0, 0);
    CHECK(std::abs(std::abs(rot) - 1.0) < 1e-12);
    for (std::size_t k = 0; k < 11; ++k)
        CHECK(std::abs(h1.data(0, k) - rot * h0.data(0, k)) < 1e-9);
}

TEST_CASE("synthesis is additive over path sets")
{
    FrequencyGrid grid(3.45e9, 10e6, 8);
    rng gen(5);
    std::vector<MpcVss> first(2), second(3);
    for (auto *set : {&first, &second})
        for (auto &p : *set)
        {
            p.a_vec.set_size(2);
            for (auto &v : p.a_vec)
                v = gen.cnormal();
            p.tau = gen.uniform(0.0, 400e-9);
        }

    std::vector<MpcVss> all = first;
    all.insert(all.end(), second.begin(), second.end());

    ChannelMatrix ha = synth_channel_vss(first, grid);
    ChannelMatrix hb = synth_channel_vss(second, grid);
    ChannelMatrix hc = synth_channel_vss(all, grid);
    CHECK(arma::abs(hc.data - ha.data - hb.data).max() < 1e-12);
}

TEST_CASE("direction synthesis with an isotropic element equals signature synthesis")
{
    // For a single isotropic element the pattern is 1 everywhere, so a
    // direction path with amplitude alpha behaves exactly like a signature
    // path with a_vec = [alpha].
    ArrayGeometry geom = make_single_element();
    FrequencyGrid grid(3.5e9, 2e6, 10);
    ArrayPattern pat = test_pattern(geom, grid);

    MpcDoa d;
    d.alpha = {0.8, -0.6};
    d.tau = 210e-9;
    d.phi = 0.4;
    d.theta = 0.2;

    MpcVss v;
    v.a_vec = arma::cx_vec{d.alpha};
    v.tau = d.tau;

    ChannelMatrix hd = synth_channel_doa({d}, pat, grid);
    ChannelMatrix hv = synth_channel_vss({v}, grid);
    CHECK(arma::abs(hd.data - hv.data).max() < 1e-12);
}

TEST_CASE("noise injection is deterministic in the seed")
{
    FrequencyGrid grid(3.5e9, 1e6, 50);
    rng gen(33);
    arma::cx_mat x(4, 50);
    for (auto &v : x)
        v = gen.cnormal();
    ChannelMatrix h(x, grid, Stage::Compensated);

    ChannelMatrix a = add_noise(h, 15.0, 999);
    ChannelMatrix b = add_noise(h, 15.0, 999);
    ChannelMatrix c = add_noise(h, 15.0, 1000);
    CHECK(arma::abs(a.data - b.data).max() == 0.0);
    CHECK(arma::abs(a.data - c.data).max() > 0.0);
}

TEST_CASE("noise power realizes the requested snr")
{
    FrequencyGrid grid(3.5e9, 1e3, 100000);
    arma::cx_mat x(5, 100000, arma::fill::ones);
    x *= 2.0; // mean sample power 4
    ChannelMatrix h(x, grid, Stage::Compensated);

    double snr_db = 20.0;
    ChannelMatrix noisy = add_noise(h, snr_db, 4242);

    double noise_power = 0.0;
    for (std::size_t k = 0; k < noisy.data.n_cols; ++k)
        for (std::size_t m = 0; m < noisy.data.n_rows; ++m)
            noise_power += std::norm(noisy.data(m, k) - h.data(m, k));
    noise_power /= double(h.data.n_elem);

    double measured_snr_db = 10.0 * std::log10(4.0 / noise_power);
    CHECK(measured_snr_db == doctest::Approx(snr_db).epsilon(0.005));
}

TEST_CASE("infinite snr is the noiseless flag and negative infinity is rejected")
{
    FrequencyGrid grid(3.5e9, 1e6, 4);
    arma::cx_mat x(2, 4, arma::fill::ones);
    ChannelMatrix h(x, grid, Stage::Compensated);

    ChannelMatrix clean = add_noise(h, std::numeric_limits<double>::infinity(), 7);
    CHECK(arma::abs(clean.data - h.data).max() == 0.0);

    CHECK_THROWS_AS(add_noise(h, -std::numeric_limits<double>::infinity(), 7), error);
    CHECK_THROWS_AS(add_noise(h, std::nan(""), 7), error);
}

TEST_CASE("dominant-path preset keeps the weak paths at least 10 dB down")
{
    for (std::uint64_t seed = 1; seed <= 100; ++seed)
    {
        Scenario sc = scenario_preset(ScenarioKind::LosDominant, 8, seed);
        REQUIRE(sc.paths.size() >= 3);
        REQUIRE(sc.paths.size() <= 5);

        // Strongest path has unit amplitude; all others at least 10 dB
        // weaker in power.
        std::size_t strongest = 0;
        for (std::size_t i = 1; i < sc.paths.size(); ++i)
            if (std::abs(sc.paths[i].alpha) > std::abs(sc.paths[strongest].alpha))
                strongest = i;
        CHECK(std::abs(sc.paths[strongest].alpha) == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t i = 0; i < sc.paths.size(); ++i)
        {
            if (i == strongest)
                continue;
            double ratio_db = 20.0 * std::log10(std::abs(sc.paths[i].alpha));
            CHECK(ratio_db <= -10.0);
        }
        CHECK(sc.geometry_preset == "ring8");
        CHECK(sc.name == "LosDominant");
    }
}

TEST_CASE("rich-scattering preset draws 15 to 25 paths with unit total power")
{
    bool saw_below_20 = false, saw_above_20 = false;
    for (std::uint64_t seed = 1; seed <= 100; ++seed)
    {
        Scenario sc = scenario_preset(ScenarioKind::NlosRich, 64, seed);
        REQUIRE(sc.paths.size() >= 15);
        REQUIRE(sc.paths.size() <= 25);
        saw_below_20 = saw_below_20 || sc.paths.size() < 20;
        saw_above_20 = saw_above_20 || sc.paths.size() > 20;

        double total = 0.0;
        for (const auto &p : sc.paths)
        {
            total += std::norm(p.alpha);
            CHECK(p.tau >= 0.0);
            CHECK(p.tau <= 1e-6);
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(sc.geometry_preset == "cylinder64");
    }
    CHECK(saw_below_20);
    CHECK(saw_above_20);
}

TEST_CASE("intermediate preset draws 3 to 6 comparable paths")
{
    for (std::uint64_t seed = 1; seed <= 50; ++seed)
    {
        Scenario sc = scenario_preset(ScenarioKind::Olos, 4, seed);
        REQUIRE(sc.paths.size() >= 3);
        REQUIRE(sc.paths.size() <= 6);
        for (const auto &p : sc.paths)
        {
            double db = 20.0 * std::log10(std::abs(p.alpha));
            CHECK(db <= 1e-9);
            CHECK(db >= -3.0 - 1e-9);
        }
    }
}

TEST_CASE("presets are deterministic per seed and respect the angle hull")
{
    AngleHull hull;
    hull.el_lo = -0.5;
    hull.el_hi = 0.5;
    Scenario a = scenario_preset(ScenarioKind::Olos, 4, 77, hull);
    Scenario b = scenario_preset(ScenarioKind::Olos, 4, 77, hull);
    REQUIRE(a.paths.size() == b.paths.size());
    for (std::size_t i = 0; i < a.paths.size(); ++i)
    {
        CHECK(a.paths[i].alpha == b.paths[i].alpha);
        CHECK(a.paths[i].tau == b.paths[i].tau);
        CHECK(a.paths[i].phi == b.paths[i].phi);
        CHECK(a.paths[i].theta == b.paths[i].theta);
        CHECK(a.paths[i].theta >= -0.5);
        CHECK(a.paths[i].theta <= 0.5);
        CHECK(a.paths[i].phi >= -pi);
        CHECK(a.paths[i].phi <= pi);
    }
}

TEST_CASE("pinned-count path generator honors the requested count")
{
    rng gen(3);
    AngleHull hull;
    std::vector<MpcDoa> paths = draw_nlos_paths(gen, 20, hull);
    CHECK(paths.size() == 20);
    double total = 0.0;
    for (const auto &p : paths)
        total += std::norm(p.alpha);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("scenario json round-trips every double bit-exactly")
{
    Scenario sc = scenario_preset(ScenarioKind::NlosRich, 16, 123456);
    std::string text = scenario_to_json(sc);
    Scenario back = scenario_from_json(text);

    CHECK(back.name == sc.name);
    CHECK(back.seed == sc.seed);
    CHECK(back.geometry_preset == sc.geometry_preset);
    // The user id is assigned by whoever consumes the scenario, not stored.
    CHECK(back.ue_id == 0);
    REQUIRE(back.paths.size() == sc.paths.size());
    for (std::size_t i = 0; i < sc.paths.size(); ++i)
    {
        CHECK(back.paths[i].alpha.real() == sc.paths[i].alpha.real());
        CHECK(back.paths[i].alpha.imag() == sc.paths[i].alpha.imag());
        CHECK(back.paths[i].tau == sc.paths[i].tau);
        CHECK(back.paths[i].phi == sc.paths[i].phi);
        CHECK(back.paths[i].theta == sc.paths[i].theta);
    }

    // File round trip via save/load.
    std::string path = "/tmp/chx_synth_scn_" + std::to_string(::getpid()) + ".json";
    save_scenario(sc, path);
    Scenario loaded = load_scenario(path);
    std::remove(path.c_str());
    CHECK(loaded.paths.size() == sc.paths.size());
    CHECK(loaded.paths.back().tau == sc.paths.back().tau);

    CHECK_THROWS_AS(load_scenario("/tmp/chx_synth_missing.json"), error);
    CHECK_THROWS_AS(scenario_from_json("{not json"), error);
}

TEST_CASE("synthesis input validation")
{
    FrequencyGrid grid(3.5e9, 1e6, 4);
    CHECK_THROWS_AS(synth_channel_vss({}, grid), error);

    MpcVss bad;
    bad.a_vec = arma::cx_vec{{1.0, 0.0}};
    bad.tau = -1e-9;
    CHECK_THROWS_AS(synth_channel_vss({bad}, grid), error);

    MpcVss a, b;
    a.a_vec = arma::cx_vec{{1.0, 0.0}};
    b.a_vec = arma::cx_vec{{1.0, 0.0}, {0.0, 1.0}};
    a.tau = b.tau = 0.0;
    CHECK_THROWS_AS(synth_channel_vss({a, b}, grid), error);
}
