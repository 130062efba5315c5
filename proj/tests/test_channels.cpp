// SPDX-License-Identifier: Apache-2.0
//
// hbf: hybrid beamforming structures and design algorithms
// Copyright (C) 2026 The hbf authors
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

#include "hbf/channels.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace hbf;

TEST_CASE("array_response: single antenna and broadside")
{
    const auto one = array_response<double>(ArrayGeometry::linear(1), 0.7);
    REQUIRE(one.size() == 1);
    CHECK(std::abs(one(0) - std::complex<double>(1.0, 0.0)) < 1e-15);

    const auto broadside = array_response<double>(ArrayGeometry::linear(4), 0.0);
    for (Index i = 0; i < 4; ++i)
        CHECK(std::abs(broadside(i) - std::complex<double>(0.5, 0.0)) < 1e-15);
}

TEST_CASE("array_response: half-wavelength pair at endfire has phase difference pi")
{
    const auto a = array_response<double>(ArrayGeometry::linear(2, 0.5), M_PI / 2);
    CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-15));
    // 2*pi*0.5*1*sin(pi/2) = pi
    CHECK(std::abs(a(1) / a(0) - std::complex<double>(-1.0, 0.0)) < 1e-12);
}

TEST_CASE("array_response: planar steering is separable and unit norm")
{
    const double az = 0.4, el = 1.1;
    const auto g = ArrayGeometry::planar(3, 4);
    const auto a = array_response<double>(g, az, el);
    CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-14));
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 4; ++n)
        {
            const double phase = M_PI * (m * std::sin(az) * std::sin(el) + n * std::cos(el));
            CHECK(std::abs(a(m * 4 + n) - std::polar(1.0 / std::sqrt(12.0), phase)) < 1e-14);
        }
}

TEST_CASE("array geometry validation")
{
    CHECK_THROWS_AS(array_response<double>(ArrayGeometry::linear(0), 0.0), Error);
    auto bad = ArrayGeometry::planar(2, 3);
    bad.count = 7;
    CHECK_THROWS_AS(array_response<double>(bad, 0.0), Error);
    CHECK_THROWS_AS(array_response<double>(ArrayGeometry::linear(4, 0.0), 0.0), Error);
}

TEST_CASE("generate_channels: flat fading gives identical subcarriers")
{
    ChannelParams p;
    p.subcarriers = 4;
    p.delay_taps = 1;
    p.seed = 11;
    const auto ch = generate_channels<double>(p, ArrayGeometry::linear(16), ArrayGeometry::linear(4), 2);
    for (int k = 0; k < 2; ++k)
        for (int f = 1; f < 4; ++f)
            CHECK((ch(k, f).array() == ch(k, 0).array()).all());
}

TEST_CASE("generate_channels: deterministic per seed")
{
    ChannelParams p;
    p.subcarriers = 8;
    p.delay_taps = 3;
    p.seed = 42;
    const auto a = generate_channels<double>(p, ArrayGeometry::linear(8), ArrayGeometry::linear(4), 2);
    const auto b = generate_channels<double>(p, ArrayGeometry::linear(8), ArrayGeometry::linear(4), 2);
    for (int k = 0; k < 2; ++k)
        for (int f = 0; f < 8; ++f)
            CHECK((a(k, f).array() == b(k, f).array()).all());
    p.seed = 43;
    const auto c = generate_channels<double>(p, ArrayGeometry::linear(8), ArrayGeometry::linear(4), 2);
    CHECK((a(0, 0) - c(0, 0)).norm() > 1e-3);
}

TEST_CASE("generate_channels: taps follow the DFT relation")
{
    ChannelParams p;
    p.n_clusters = 3;
    p.n_rays = 2;
    p.subcarriers = 4;
    p.delay_taps = 2;
    p.seed = 5;
    const auto ch = generate_channels<double>(p, ArrayGeometry::linear(4), ArrayGeometry::linear(2), 1);
    // Rebuild the taps from the recorded paths.
    const double scale = std::sqrt(4.0 * 2.0 / 6.0);
    std::vector<CMatrix<double>> taps(2, CMatrix<double>::Zero(2, 4));
    for (const auto &path : ch.paths[0])
        taps[path.tap] += scale * path.gain * array_response<double>(ch.rx, path.rx_azimuth) *
                          array_response<double>(ch.tx, path.tx_azimuth).adjoint();
    for (int f = 0; f < 4; ++f)
    {
        const CMatrix<double> expected = taps[0] + std::polar(1.0, -2.0 * M_PI * f / 4.0) * taps[1];
        CHECK((expected - ch(0, f)).norm() < 1e-12);
    }
    for (const auto &path : ch.paths[0])
        CHECK(path.tap == path.cluster % 2);
}

TEST_CASE("generate_channels: mean squared Frobenius norm equals N_t N_r")
{
    // 10 000 draws of a 16 x 64 channel, expected 1024 within 5%.
    ChannelParams p;
    double total = 0;
    const int draws = 10000;
    for (int d = 0; d < draws; ++d)
    {
        p.seed = 900000 + std::uint64_t(d);
        total += generate_channels<double>(p, ArrayGeometry::linear(64), ArrayGeometry::linear(16), 1)(0, 0)
                     .squaredNorm();
    }
    const double mean = total / draws;
    CHECK(mean == doctest::Approx(1024.0).epsilon(0.05));
}

TEST_CASE("generate_channels: enough paths give full rank")
{
    ChannelParams p;
    for (int s = 0; s < 20; ++s)
    {
        p.seed = std::uint64_t(s);
        const auto ch = generate_channels<double>(p, ArrayGeometry::linear(16), ArrayGeometry::linear(8), 1);
        const auto sv = oracle::singular_values_by_gram(ch(0, 0));
        CHECK(sv(sv.size() - 1) > 1e-10);
    }
}

TEST_CASE("generate_channels: parameter validation and size cap")
{
    ChannelParams p;
    p.subcarriers = 2;
    p.delay_taps = 3;
    CHECK_THROWS_AS(generate_channels<double>(p, ArrayGeometry::linear(4), ArrayGeometry::linear(2), 1), Error);
    p.delay_taps = 1;
    try
    {
        generate_channels<double>(p, ArrayGeometry::linear(64), ArrayGeometry::linear(16), 4, 1000);
        FAIL("expected the size cap to trigger");
    }
    catch (const Error &e)
    {
        CHECK(e.tag() == "dimension");
    }
}

TEST_CASE("single-precision instantiation")
{
    const auto a = array_response<float>(ArrayGeometry::linear(8), 0.3f);
    CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-6));
    ChannelParams p;
    const auto ch = generate_channels<float>(p, ArrayGeometry::linear(8), ArrayGeometry::linear(2), 1);
    CHECK(ch(0, 0).rows() == 2);
}
