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
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <unistd.h>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "metrics/metrics.hpp"

using namespace chx;

namespace
{

arma::cx_vec random_vec(std::size_t m, rng &gen)
{
    arma::cx_vec v(m);
    for (auto &x : v)
        x = gen.cnormal();
    return v;
}

constexpr double inf = std::numeric_limits<double>::infinity();

} // namespace

TEST_CASE("mse examples")
{
    arma::cx_vec t = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};

    // Exact match reports -infinity, not NaN.
    CHECK(mse_db(t, t) == -inf);

    // A zero estimate against a unit-power channel gives 0 dB.
    arma::cx_vec zero(4, arma::fill::zeros);
    CHECK(mse_db(t, zero) == doctest::Approx(0.0).epsilon(1e-14));

    // Random M=64 pair against a scalar-loop oracle.
    rng gen(7);
    arma::cx_vec a = random_vec(64, gen), b = random_vec(64, gen);
    double err = 0.0;
    for (std::size_t m = 0; m < 64; ++m)
        err += std::norm(a[m] - b[m]);
    double expect = 10.0 * std::log10(err / 64.0);
    CHECK(mse_db(a, b) == doctest::Approx(expect).epsilon(1e-12));

    CHECK_THROWS_AS(mse_db(a, random_vec(32, gen)), error);
}

TEST_CASE("beamforming gains against a hand-evaluated example")
{
    arma::cx_vec t = {{1.0, 0.0}, {0.0, 2.0}, {1.0, 1.0}, {0.0, 0.0}};
    arma::cx_vec e = {{0.5, 0.5}, {1.0, 0.0}, {0.0, -1.0}, {2.0, 0.0}};

    double meas = 1.0 + 4.0 + 2.0 + 0.0;
    std::complex<double> ip{0.0, 0.0};
    for (std::size_t m = 0; m < 4; ++m)
        ip += std::conj(e[m]) * t[m];
    double en = 0.5 + 1.0 + 1.0 + 4.0;

    BeamformingGains g = beamforming_gains(t, e);
    CHECK(g.bg_meas == doctest::Approx(meas).epsilon(1e-15));
    CHECK(g.bg_est == doctest::Approx(std::norm(ip) / en).epsilon(1e-14));
    CHECK(g.bg_uni * 4.0 == g.bg_meas);

    arma::cx_vec zero(4, arma::fill::zeros);
    try
    {
        beamforming_gains(t, zero);
        FAIL("expected zero_estimate");
    }
    catch (const error &err)
    {
        CHECK(err.code() == errc::zero_estimate);
    }
}

TEST_CASE("uniform gain is the measured gain divided by the element count")
{
    rng gen(3);
    for (std::size_t m : {std::size_t(4), std::size_t(64)})
    {
        arma::cx_vec t = random_vec(m, gen), e = random_vec(m, gen);
        BeamformingGains g = beamforming_gains(t, e);
        // Power-of-two divisor: the product reconstructs bg_meas exactly.
        CHECK(g.bg_uni * double(m) == g.bg_meas);
    }
}

TEST_CASE("beamforming efficiency is invariant to scale and phase")
{
    rng gen(11);
    arma::cx_vec h = random_vec(16, gen);

    CHECK(beamforming_efficiency_db(h, h) == 0.0);

    arma::cx_vec scaled = h * std::polar(3.9, 1.234);
    CHECK(beamforming_efficiency_db(h, scaled) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(beamforming_efficiency_db(h, scaled)) < 1e-9);
}

TEST_CASE("beamforming efficiency of orthogonal vectors is negative infinity")
{
    arma::cx_vec a = {{1.0, 0.0}, {0.0, 0.0}};
    arma::cx_vec b = {{0.0, 0.0}, {1.0, 0.0}};
    CHECK(beamforming_efficiency_db(a, b) == -inf);

    arma::cx_vec zero(2, arma::fill::zeros);
    try
    {
        beamforming_efficiency_db(a, zero);
        FAIL("expected zero_vector");
    }
    catch (const error &e)
    {
        CHECK(e.code() == errc::zero_vector);
    }
    CHECK_THROWS_AS(beamforming_efficiency_db(zero, a), error);
}

TEST_CASE("beamforming efficiency never exceeds zero dB")
{
    rng gen(17);
    for (int i = 0; i < 5000; ++i)
    {
        arma::cx_vec t = random_vec(8, gen);
        arma::cx_vec e = random_vec(8, gen);
        CHECK(beamforming_efficiency_db(t, e) <= 0.0);
    }

    // Adversarial near-collinear pairs where the Cauchy-Schwarz ratio is
    // within rounding of 1; the clamp keeps the result at or below 0 dB.
    for (int i = 0; i < 2000; ++i)
    {
        arma::cx_vec t = random_vec(6, gen);
        arma::cx_vec e = t * std::polar(1.0 + 1e-15 * gen.uniform(), gen.uniform(0.0, 6.28));
        e[0] += std::complex<double>(1e-16 * gen.uniform(), -1e-16 * gen.uniform());
        double be = beamforming_efficiency_db(t, e);
        CHECK(be <= 0.0);
        CHECK(be > -1e-9); // still essentially collinear
    }
}

TEST_CASE("single-user precoders are collinear with the conjugate channel")
{
    rng gen(29);
    arma::cx_mat h(8, 1);
    h.col(0) = random_vec(8, gen);

    PrecoderSet mr = precode(h, PrecoderScheme::Mr);
    PrecoderSet zf = precode(h, PrecoderScheme::Zf);
    CHECK(mr.scheme == PrecoderScheme::Mr);
    CHECK(zf.scheme == PrecoderScheme::Zf);

    CHECK(arma::norm(mr.vectors.col(0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(arma::norm(zf.vectors.col(0)) == doctest::Approx(1.0).epsilon(1e-14));

    arma::cx_vec dir = arma::conj(h.col(0)) / arma::norm(h.col(0));
    CHECK(arma::abs(mr.vectors.col(0) - dir).max() < 1e-13);
    // With one user zero-forcing reduces to the matched direction.
    CHECK(arma::abs(zf.vectors.col(0) - dir).max() < 1e-12);
}

TEST_CASE("orthogonal users make matched and zero-forcing precoders coincide")
{
    arma::cx_mat h(4, 2, arma::fill::zeros);
    h(0, 0) = {1.0, 0.5};
    h(1, 0) = {-0.3, 0.2};
    h(2, 1) = {0.8, -0.1};
    h(3, 1) = {0.4, 0.9};

    PrecoderSet mr = precode(h, PrecoderScheme::Mr);
    PrecoderSet zf = precode(h, PrecoderScheme::Zf);
    CHECK(arma::abs(mr.vectors - zf.vectors).max() < 1e-12);
}

TEST_CASE("zero-forcing removes inter-user leakage under perfect knowledge")
{
    rng gen(31);
    for (int trial = 0; trial < 50; ++trial)
    {
        arma::cx_mat h(8, 2);
        h.col(0) = random_vec(8, gen);
        h.col(1) = random_vec(8, gen);

        PrecoderSet zf = precode(h, PrecoderScheme::Zf);
        for (std::size_t n = 0; n < 2; ++n)
            for (std::size_t j = 0; j < 2; ++j)
            {
                std::complex<double> cross = arma::as_scalar(h.col(n).st() * zf.vectors.col(j));
                if (n == j)
                    continue;
                double scale = arma::norm(h.col(n));
                CHECK(std::abs(cross) / scale < 1e-10);
            }
    }
}

TEST_CASE("nearly co-located users trip the conditioning guard")
{
    rng gen(41);
    arma::cx_mat h(6, 2);
    h.col(0) = random_vec(6, gen);
    h.col(1) = h.col(0); // identical channels, singular Gram

    try
    {
        precode(h, PrecoderScheme::Zf);
        FAIL("expected singular_gram");
    }
    catch (const error &e)
    {
        CHECK(e.code() == errc::singular_gram);
    }

    // Matched-ratio precoding has no Gram and still works.
    CHECK_NOTHROW(precode(h, PrecoderScheme::Mr));

    arma::cx_mat with_zero(6, 2, arma::fill::zeros);
    with_zero.col(0) = random_vec(6, gen);
    CHECK_THROWS_AS(precode(with_zero, PrecoderScheme::Mr), error);
}

TEST_CASE("single-user sinr follows the closed form")
{
    rng gen(47);
    arma::cx_mat h(8, 1);
    h.col(0) = random_vec(8, gen);

    LinkBudget lb{13.0};
    PrecoderSet mr = precode(h, PrecoderScheme::Mr);
    arma::vec s = sinr(h, mr, lb);
    REQUIRE(s.n_elem == 1);

    // With a matched unit-norm precoder h^T w = ||h||, so
    // SINR = rho ||h||^2 with no interference term.
    double rho = std::pow(10.0, 1.3);
    double expect = rho * arma::dot(arma::abs(h.col(0)), arma::abs(h.col(0)));
    CHECK(s[0] == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("two-user sinr matches a scalar expansion")
{
    rng gen(53);
    arma::cx_mat h_true(6, 2), h_est(6, 2);
    for (std::size_t n = 0; n < 2; ++n)
    {
        h_true.col(n) = random_vec(6, gen);
        h_est.col(n) = h_true.col(n) + 0.1 * random_vec(6, gen);
    }

    LinkBudget lb{10.0};
    for (PrecoderScheme scheme : {PrecoderScheme::Mr, PrecoderScheme::Zf})
    {
        PrecoderSet prec = precode(h_est, scheme);
        arma::vec s = sinr(h_true, prec, lb);

        for (std::size_t n = 0; n < 2; ++n)
        {
            std::complex<double> sig{0.0, 0.0}, leak{0.0, 0.0};
            for (std::size_t m = 0; m < 6; ++m)
            {
                sig += h_true(m, n) * prec.vectors(m, n);
                leak += h_true(m, n) * prec.vectors(m, 1 - n);
            }
            double rho = 10.0;
            double expect = rho * std::norm(sig) / (rho * std::norm(leak) + 1.0);
            CHECK(s[n] == doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("sinr grows monotonically with the transmit snr")
{
    rng gen(59);
    arma::cx_mat h(6, 2);
    h.col(0) = random_vec(6, gen);
    h.col(1) = random_vec(6, gen);
    PrecoderSet mr = precode(h, PrecoderScheme::Mr);

    double prev0 = -1.0;
    for (double db : {-10.0, 0.0, 10.0, 20.0, 40.0})
    {
        arma::vec s = sinr(h, mr, LinkBudget{db});
        CHECK(s[0] > prev0);
        prev0 = s[0];
    }

    CHECK_THROWS_AS(sinr(h, mr, LinkBudget{std::nan("")}), error);
}

TEST_CASE("spectral efficiency examples")
{
    CHECK(spectral_efficiency(0.0) == 0.0);
    CHECK(spectral_efficiency(1.0) == 1.0);
    CHECK(spectral_efficiency(3.0) == 2.0);
    CHECK(spectral_efficiency(1e10) ==
          doctest::Approx(std::log2(1.0 + 1e10)).epsilon(1e-15));
}

TEST_CASE("metric formatting uses 17 significant digits and inf sentinels")
{
    CHECK(format_metric(inf) == "inf");
    CHECK(format_metric(-inf) == "-inf");
    CHECK(format_metric(0.0) == "0");
    CHECK(format_metric(1.0) == "1");
    CHECK(format_metric(0.5) == "0.5");

    // %.17g output parses back to the identical double.
    rng gen(61);
    for (int i = 0; i < 1000; ++i)
    {
        double v = (gen.uniform() - 0.5) * std::pow(10.0, gen.uniform(-30.0, 30.0));
        std::string s = format_metric(v);
        double back = std::strtod(s.c_str(), nullptr);
        CHECK(back == v);
    }
}

TEST_CASE("csv serialization has the pinned header and one line per row")
{
    CHECK(std::string(metrics_csv_header) ==
          "f_Hz,ue_id,mse_db,be_db,bg_meas,bg_est,bg_uni,sinr_db_mr,se_mr,sinr_db_zf,se_zf");

    MetricsRow r1;
    r1.f_hz = 3.5e9;
    r1.ue_id = 0;
    r1.mse_db = -42.5;
    r1.be_db = -inf;
    r1.bg_meas = 64.0;
    r1.bg_est = 63.5;
    r1.bg_uni = 1.0;
    r1.sinr_db_mr = 20.0;
    r1.se_mr = 6.65821148275179;
    r1.sinr_db_zf = 19.0;
    r1.se_zf = 6.33342373374282;

    MetricsRow r2 = r1;
    r2.ue_id = 1;
    r2.be_db = 0.0;

    std::string text = metrics_to_csv({r1, r2});
    std::istringstream lines(text);
    std::string line;
    std::vector<std::string> all;
    while (std::getline(lines, line))
        all.push_back(line);
    REQUIRE(all.size() == 3);
    CHECK(all[0] == metrics_csv_header);

    for (std::size_t i = 1; i < 3; ++i)
    {
        std::size_t commas = 0;
        for (char c : all[i])
            commas += (c == ',');
        CHECK(commas == 10);
    }
    CHECK(all[1].find("-inf") != std::string::npos);
    CHECK(all[1].substr(0, all[1].find(',')) == "3500000000");
    CHECK(all[2].find(",1,") != std::string::npos);

    // File writer emits exactly the serialized text.
    std::string path = "/tmp/chx_metrics_" + std::to_string(::getpid()) + ".csv";
    write_metrics_csv(path, {r1, r2});
    std::ifstream f(path);
    std::stringstream buf;
    buf << f.rdbuf();
    std::remove(path.c_str());
    CHECK(buf.str() == text);

    // Empty row set still yields a headered file.
    std::string only_header = metrics_to_csv({});
    CHECK(only_header == std::string(metrics_csv_header) + "\n");
}

TEST_CASE("multiuser channel stacking and validation")
{
    FrequencyGrid g(3.5e9, 1e6, 3);
    rng gen(67);
    arma::cx_mat a(4, 3), b(4, 3);
    for (auto &v : a)
        v = gen.cnormal();
    for (auto &v : b)
        v = gen.cnormal();
    ChannelMatrix ca(a, g, Stage::Normalized);
    ChannelMatrix cb(b, g, Stage::Normalized);

    MultiUserChannel mu;
    mu.per_ue = {&ca, &cb};
    CHECK_NOTHROW(mu.validate());
    CHECK(mu.n_ue() == 2);

    arma::cx_mat stack = mu.at_frequency(1);
    CHECK(stack.n_rows == 4);
    CHECK(stack.n_cols == 2);
    CHECK(arma::abs(stack.col(0) - a.col(1)).max() == 0.0);
    CHECK(arma::abs(stack.col(1) - b.col(1)).max() == 0.0);
    CHECK_THROWS_AS(mu.at_frequency(3), error);

    FrequencyGrid other(3.6e9, 1e6, 3);
    ChannelMatrix cc(b, other, Stage::Normalized);
    MultiUserChannel bad;
    bad.per_ue = {&ca, &cc};
    CHECK_THROWS_AS(bad.validate(), error);

    MultiUserChannel empty;
    CHECK_THROWS_AS(empty.validate(), error);

    // Precoding through the group interface matches the direct call.
    PrecoderSet direct = precode(stack, PrecoderScheme::Zf);
    PrecoderSet via = precode(mu, 1, PrecoderScheme::Zf);
    CHECK(arma::abs(direct.vectors - via.vectors).max() == 0.0);
}
