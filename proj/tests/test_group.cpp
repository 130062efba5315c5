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

#include "hbf/hbf.hpp"
#include "oracles.hpp"

using namespace hbf;

namespace
{

const std::vector<Algorithm> nested{Algorithm::omp, Algorithm::mo_altmin, Algorithm::pe_relaxation,
                                    Algorithm::dps_full, Algorithm::fps};

} // namespace

TEST_CASE("group-connected with one group reproduces the inner solver bit for bit")
{
    const CMatrix<double> f = oracle::random_complex(16, 4, 1);
    const auto book = make_codebook<double>(oracle::random_unit_modulus(16, 10, 2));
    SolverSettings settings;
    settings.altmin.seed = 9;
    for (Algorithm a : nested)
    {
        const auto grouped = group_connected_solve<double>(f, 4, 1, a, settings, &book);
        const auto inner =
            power_normalize(detail::design_raw<double>(a, f, 4, settings, &book), f.squaredNorm());
        CHECK_MESSAGE((grouped.analog.matrix.array() == inner.analog.matrix.array()).all(), to_string(a));
        CHECK_MESSAGE((grouped.digital.array() == inner.digital.array()).all(), to_string(a));
    }
    const auto mo = mo_altmin<double>(f, 4, settings.altmin);
    const auto g1 = group_connected_solve<double>(f, 4, 1, Algorithm::mo_altmin, settings);
    CHECK((mo.analog.matrix.array() == g1.analog.matrix.array()).all());
}

TEST_CASE("group-connected with one group per chain has the partial mask")
{
    const CMatrix<double> f = oracle::random_complex(16, 4, 3);
    for (Algorithm a : nested)
    {
        const auto pair = group_connected_solve<double>(f, 4, 4, a);
        CHECK_MESSAGE((pair.analog.mask == partial_mask(16, 4)).all(), to_string(a));
        std::string why;
        CHECK_MESSAGE(satisfies_invariants(pair.analog, 1e-12, &why), to_string(a) << ": " << why);
        CHECK(pair.product().squaredNorm() == doctest::Approx(f.squaredNorm()).epsilon(1e-10));
    }
}

TEST_CASE("group-connected residual never improves on fewer groups for the exact DPS design")
{
    for (int seed = 0; seed < 10; ++seed)
    {
        const CMatrix<double> f = oracle::random_complex(16, 4, 100 + seed);
        const auto raw = [&](int eta) {
            return approximation_residual<double>(
                f, detail::group_connected_raw<double>(f, 4, eta, Algorithm::dps_full, {}, nullptr));
        };
        CHECK(raw(2) >= raw(1) * (1 - 1e-12));
        CHECK(raw(4) >= raw(1) * (1 - 1e-12));
    }
}

TEST_CASE("group-connected rejects bad group counts and non-nestable solvers")
{
    const CMatrix<double> f = oracle::random_complex(12, 2, 4);
    CHECK_THROWS_AS(group_connected_solve<double>(f, 4, 3, Algorithm::dps_full), Error);
    CHECK_THROWS_AS(group_connected_solve<double>(f, 4, 0, Algorithm::dps_full), Error);
    CHECK_THROWS_AS(group_connected_solve<double>(f, 4, 2, Algorithm::sps_partial), Error);
}

TEST_CASE("structure names and hardware follow the realized mapping")
{
    CHECK(structure_name(Algorithm::mo_altmin, 1) == "SPS-fully");
    CHECK(structure_name(Algorithm::fps, 2) == "FPS-group(2)");
    CHECK(structure_name(Algorithm::sps_partial, 1) == "SPS-partially");
    CHECK(structure_name(Algorithm::dps_kmeans, 1) == "DPS-dynamic");
    CHECK(algorithm_hardware(Algorithm::fps, 2, 64, 4, 10).switches == 1280);
    CHECK(algorithm_hardware(Algorithm::dps_full, 1, 144, 8, 10).phase_shifters == 2304);
    CHECK(parse_algorithm("mo-altmin") == Algorithm::mo_altmin);
    CHECK_THROWS_AS(parse_algorithm("nope"), Error);
}

TEST_CASE("design_link: fully digital passthrough and group receivers")
{
    ChannelParams p;
    p.seed = 21;
    HybridConfig cfg;
    cfg.n_t = 16;
    cfg.n_r = 4;
    cfg.n_s = 2;
    cfg.n_rf_t = 2;
    cfg.n_rf_r = 2;
    const auto ch = generate_channels<double>(p, ArrayGeometry::linear(16), ArrayGeometry::linear(4), 1);
    const auto f_opt = fully_digital_beamformer(ch, cfg);
    const auto fd = design_link<double>(Algorithm::fully_digital, ch, cfg, f_opt, 1, {});
    CHECK((fd.tx.product() - f_opt).norm() == 0.0);
    const auto w = fully_digital_combiners(ch, f_opt, 2);
    CHECK((fd.rx[0].product() - w[0]).norm() == 0.0);

    const auto g = design_link<double>(Algorithm::dps_full, ch, cfg, f_opt, 2, {});
    CHECK((g.rx[0].analog.mask == group_mask(4, 2, 2)).all());
    const double se_g = spectral_efficiency<double>(ch, g.tx, g.rx, 2, 0.0).bits_per_hz;
    CHECK(se_g > 0);

    HybridConfig odd = cfg;
    odd.n_r = 3;
    const auto ch3 = generate_channels<double>(p, ArrayGeometry::linear(16), ArrayGeometry::linear(3), 1);
    CHECK_THROWS_AS(design_link<double>(Algorithm::dps_full, ch3, odd, fully_digital_beamformer(ch3, odd), 2, {}),
                    Error);
}
