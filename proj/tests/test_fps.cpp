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

#include <cmath>
#include <random>

using namespace hbf;

namespace
{

CMatrix<double> bits_to_complex(const Mask &bits)
{
    return bits.cast<double>().matrix().cast<std::complex<double>>();
}

SwitchRowProblem<double> random_row(int n_c, int n_rf, int cols, std::uint64_t seed)
{
    const CMatrix<double> g = fps_bank_default<double>(n_c).block_matrix(n_rf) * oracle::random_complex(n_rf, cols, seed);
    const Eigen::RowVectorXcd y = oracle::random_complex(1, cols, seed + 7777);
    const RMatrix<double> quad = (g * g.adjoint()).real();
    return make_switch_row<double>(g, quad, y, BitRow::Constant(g.rows(), true));
}

} // namespace

TEST_CASE("fps_bank_default: uniform grid with unit-norm vector")
{
    const auto one = fps_bank_default<double>(1);
    REQUIRE(one.size() == 1);
    CHECK(one.phases(0) == 0.0);
    const auto four = fps_bank_default<double>(4);
    for (int i = 0; i < 4; ++i)
        CHECK(four.phases(i) == doctest::Approx(i * pi_v<double> / 2));
    CHECK(std::abs(fps_bank_default<double>(10).vector().norm() - 1.0) <= 1e-15);
    CHECK_THROWS_AS(fps_bank_default<double>(0), Error);
}

TEST_CASE("switch row: quadratic form equals the direct residual")
{
    const int n_c = 3, n_rf = 2;
    const CMatrix<double> g = fps_bank_default<double>(n_c).block_matrix(n_rf) * oracle::random_complex(n_rf, 4, 1);
    const Eigen::RowVectorXcd y = oracle::random_complex(1, 4, 2);
    const auto p = make_switch_row<double>(g, (g * g.adjoint()).real(), y, BitRow::Constant(6, true));
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t)
    {
        BitRow bits(6);
        Eigen::RowVectorXcd approx = Eigen::RowVectorXcd::Zero(4);
        for (Index k = 0; k < 6; ++k)
        {
            bits(k) = rng() & 1;
            if (bits(k))
                approx += g.row(k);
        }
        CHECK(row_cost(p, bits) == doctest::Approx((y - approx).squaredNorm()).epsilon(1e-12));
    }
}

TEST_CASE("switch row: exhaustive search finds an exact atom and the oracle optimum")
{
    const int n_c = 4, n_rf = 2;
    const CMatrix<double> g = fps_bank_default<double>(n_c).block_matrix(n_rf) * oracle::random_complex(n_rf, 3, 4);
    const RMatrix<double> quad = (g * g.adjoint()).real();
    // a single bank phase times a digital row
    const Eigen::RowVectorXcd atom = g.row(5);
    const auto exact = make_switch_row<double>(g, quad, atom, BitRow::Constant(8, true));
    CHECK(row_cost(exact, fps_row_exhaustive(exact)) <= 1e-12);

    for (int t = 0; t < 50; ++t)
    {
        const Eigen::RowVectorXcd y = oracle::random_complex(1, 3, 100 + t);
        const auto p = make_switch_row<double>(g, quad, y, BitRow::Constant(8, true));
        CHECK(row_cost(p, fps_row_exhaustive(p)) == doctest::Approx(oracle::best_switch_row(g, y)).epsilon(1e-10));
    }
}

TEST_CASE("switch row: disallowed switches stay open")
{
    auto p = random_row(3, 2, 3, 5);
    p.allowed.segment(3, 3).setConstant(false);
    CHECK_FALSE(fps_row_exhaustive(p).segment(3, 3).any());
    CHECK_FALSE(fps_row_local_search(p, BitRow::Constant(6, true)).segment(3, 3).any());
}

TEST_CASE("switch row: local search never increases the cost and usually hits the optimum")
{
    int hits = 0;
    const int rows = 300;
    for (int t = 0; t < rows; ++t)
    {
        const auto p = random_row(4, 2, 3, 1000 + t);
        const BitRow start = fps_row_relaxed_start(p);
        const BitRow found = fps_row_local_search(p, start);
        CHECK(row_cost(p, found) <= row_cost(p, start) + 1e-12);
        const double best = row_cost(p, fps_row_exhaustive(p));
        if (row_cost(p, found) <= best + 1e-10 * std::max(1.0, best))
            ++hits;
    }
    MESSAGE("local search optimal on " << hits << "/" << rows);
    CHECK(hits >= 0.9 * rows);
}

TEST_CASE("fps_altmin: trace, factorization exactness and power")
{
    for (std::uint64_t seed = 0; seed < 8; ++seed)
    {
        const CMatrix<double> f = oracle::random_complex(16, 2, 2000 + seed);
        FpsProblem<double> problem{f, fps_bank_default<double>(seed % 2 ? 3 : 10), 2, {}};
        const auto pair = fps_altmin(problem);
        const auto &obj = pair.trace.objective;
        for (std::size_t i = 1; i < obj.size(); ++i)
            CHECK(obj[i] <= obj[i - 1] + 1e-10);
        const auto &payload = std::get<FpsPayload<double>>(pair.analog.payload);
        const CMatrix<double> sc = bits_to_complex(payload.switches.bits) * problem.bank.block_matrix(2);
        CHECK((pair.analog.matrix - sc).cwiseAbs().maxCoeff() <= 1e-15);
        CHECK(satisfies_invariants(pair.analog, 1e-15));
        CHECK(pair.product().squaredNorm() == doctest::Approx(f.squaredNorm()).epsilon(1e-10));
    }
}

TEST_CASE("fps_altmin: a large bank approaches the DPS residual from above")
{
    for (std::uint64_t seed = 0; seed < 3; ++seed)
    {
        const CMatrix<double> f = oracle::random_complex(16, 3, 3000 + seed);
        FpsProblem<double> problem{f, fps_bank_default<double>(64), 2, {}};
        const double fps = approximation_residual<double>(f, detail::fps_altmin_raw(problem, FpsOptions{}));
        const double dps = approximation_residual<double>(f, dps_full_solve<double>(f, 2));
        CHECK(fps >= dps * (1 - 1e-12));
        CHECK((fps - dps) / dps <= 0.02);
    }
}

TEST_CASE("fps_altmin: group mask keeps off-block switches open")
{
    const CMatrix<double> f = oracle::random_complex(16, 4, 4000);
    const Mask mask = group_mask(16, 4, 2);
    FpsProblem<double> problem{f, fps_bank_default<double>(5), 4, mask};
    const auto pair = fps_altmin(problem);
    const auto &bits = std::get<FpsPayload<double>>(pair.analog.payload).switches.bits;
    CHECK_FALSE(bits.block(0, 10, 8, 10).any());
    CHECK_FALSE(bits.block(8, 0, 8, 10).any());
    CHECK(satisfies_invariants(pair.analog, 1e-15));

    const auto grouped = solve<double>(Algorithm::fps, f, 4, 2);
    const auto &gb = std::get<FpsPayload<double>>(grouped.analog.payload).switches.bits;
    CHECK_FALSE(gb.block(0, 20, 8, 20).any());
    CHECK_FALSE(gb.block(8, 0, 8, 20).any());
}
