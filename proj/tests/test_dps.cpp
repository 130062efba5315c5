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

#include <algorithm>
#include <cmath>
#include <random>

using namespace hbf;

namespace
{

double tail_energy(const Eigen::VectorXd &sigma_desc, Index keep)
{
    return sigma_desc.tail(sigma_desc.size() - keep).squaredNorm();
}

// Sum over groups of ||Y_j||^2 - lambda_1(Y_j^H Y_j), from the eigenvalue oracle.
double partial_residual_oracle(const CMatrix<double> &f, const MappingSets &m)
{
    double total = 0;
    for (const auto &set : m.sets)
    {
        double energy = 0;
        for (Index i : set)
            energy += f.row(i).squaredNorm();
        total += energy - oracle::top_eigenvalue(f, set);
    }
    return total;
}

double objective_oracle(const CMatrix<double> &f, const MappingSets &m)
{
    double total = 0;
    for (const auto &set : m.sets)
        total += oracle::top_eigenvalue(f, set);
    return total;
}

} // namespace

TEST_CASE("DPS full: rank-N_s targets are decomposed exactly")
{
    for (int n : {1, 2, 4})
        for (int seed = 0; seed < 20; ++seed)
        {
            const CMatrix<double> f =
                oracle::random_complex(16, n, 10 * seed + n) * oracle::random_complex(n, n, 1000 + seed);
            const auto pair = dps_full_solve<double>(f, n);
            CHECK(approximation_residual<double>(f, pair) <= 1e-9 * f.norm());
            std::string why;
            CHECK_MESSAGE(satisfies_invariants(pair.analog, 1e-12, &why), why);
        }
}

TEST_CASE("DPS full: residual is the tail singular-value energy")
{
    for (int seed = 0; seed < 20; ++seed)
    {
        const CMatrix<double> f = oracle::random_complex(16, 24, 50 + seed);
        const Eigen::VectorXd sigma = oracle::singular_values_by_gram(f);
        const auto pair = dps_full_solve<double>(f, 4);
        const double r = approximation_residual<double>(f, pair);
        CHECK(r * r == doctest::Approx(tail_energy(sigma, 4)).epsilon(1e-8));
        CHECK(pair.trace.objective.back() == doctest::Approx(r * r).epsilon(1e-14));
    }
}

TEST_CASE("DPS full: more chains than rank still exact, and entries peak at modulus two")
{
    const CMatrix<double> f = oracle::random_complex(10, 2, 71) * oracle::random_complex(2, 5, 72);
    const auto pair = dps_full_solve<double>(f, 3);
    CHECK(approximation_residual<double>(f, pair) <= 1e-9 * f.norm());
    for (Index j = 0; j < 3; ++j)
        CHECK(pair.analog.matrix.col(j).cwiseAbs().maxCoeff() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(pair.product().norm() <= f.norm() * (1 + 1e-12));
}

TEST_CASE("DPS phase split: closed-form cases")
{
    {
        const auto [phi, theta] = dps_phase_split<double>({2.0, 0.0});
        CHECK(phi == doctest::Approx(0.0));
        CHECK(theta == doctest::Approx(0.0));
    }
    {
        const auto [phi, theta] = dps_phase_split<double>({0.0, 0.0});
        CHECK(phi == doctest::Approx(pi_v<double> / 2));
        CHECK(theta == doctest::Approx(-pi_v<double> / 2));
        CHECK(std::abs(std::polar(1.0, phi) + std::polar(1.0, theta)) <= 1e-15);
    }
    {
        const std::complex<double> a(1.0, 1.0);
        const auto [phi, theta] = dps_phase_split(a);
        CHECK(std::abs(std::polar(1.0, phi) + std::polar(1.0, theta) - a) <= 1e-12);
    }
    CHECK_NOTHROW(dps_phase_split<double>({2.0 + 1e-13, 0.0}));
    try
    {
        dps_phase_split<double>({2.1, 0.0});
        FAIL("expected a domain error");
    }
    catch (const Error &e)
    {
        CHECK(e.tag() == "domain");
    }
}

TEST_CASE("DPS phase split: random round trip")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> r(0.0, 2.0), p(-pi_v<double>, pi_v<double>);
    double worst = 0;
    for (int i = 0; i < 100000; ++i)
    {
        const std::complex<double> a = std::polar(r(rng), p(rng));
        const auto [phi, theta] = dps_phase_split(a);
        worst = std::max(worst, std::abs(std::polar(1.0, phi) + std::polar(1.0, theta) - a));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("DPS partial: parallel rows and single-antenna groups are exact")
{
    const Eigen::RowVectorXcd base = oracle::random_complex(1, 5, 80);
    CMatrix<double> f(6, 5);
    const CMatrix<double> scalars = oracle::random_complex(6, 1, 81);
    for (Index i = 0; i < 6; ++i)
        f.row(i) = scalars(i, 0) * base;
    const auto parallel = dps_partial_solve<double>(f, fixed_mapping(6, 2));
    CHECK(approximation_residual<double>(f, parallel) <= 1e-12 * f.norm());

    const CMatrix<double> g = oracle::random_complex(4, 3, 82) * 10.0;
    const auto singles = dps_partial_solve<double>(g, fixed_mapping(4, 4));
    CHECK(approximation_residual<double>(g, singles) <= 1e-12 * g.norm());
    std::string why;
    CHECK_MESSAGE(satisfies_invariants(singles.analog, 1e-12, &why), why);
}

TEST_CASE("DPS partial: residual matches the eigenvalue oracle")
{
    for (int seed = 0; seed < 20; ++seed)
    {
        const CMatrix<double> f = oracle::random_complex(8, 3, 90 + seed) * (seed % 3 ? 1.0 : 5.0);
        const auto m = fixed_mapping(8, 2);
        const auto pair = dps_partial_solve<double>(f, m);
        const double r = approximation_residual<double>(f, pair);
        CHECK(r * r == doctest::Approx(partial_residual_oracle(f, m)).epsilon(1e-9));
        CHECK(satisfies_invariants(pair.analog));
        CHECK((pair.analog.mask == partial_mask(8, 2)).all());
    }
}

TEST_CASE("DPS partial: residual invariant to row order within a group")
{
    const CMatrix<double> f = oracle::random_complex(8, 4, 120);
    MappingSets a{{{0, 1, 2, 3}, {4, 5, 6, 7}}};
    MappingSets b{{{3, 1, 0, 2}, {6, 7, 5, 4}}};
    CHECK(approximation_residual<double>(f, dps_partial_solve<double>(f, a)) ==
          doctest::Approx(approximation_residual<double>(f, dps_partial_solve<double>(f, b))).epsilon(1e-12));
}

TEST_CASE("mapping validation")
{
    CHECK_THROWS_AS(validate(MappingSets{{{0, 1}, {}}}, 2), Error);
    CHECK_THROWS_AS(validate(MappingSets{{{0, 1}, {1}}}, 2), Error);
    CHECK_THROWS_AS(validate(MappingSets{{{0}, {1}}}, 3), Error);
    CHECK_THROWS_AS(validate(MappingSets{{{0}, {5}}}, 2), Error);
    CHECK_NOTHROW(validate(fixed_mapping(7, 3), 7));
}

TEST_CASE("dynamic mapping: separable bundles are recovered")
{
    // rows 0,2,5 along e1 and rows 1,3,4 along e2 (orthogonal bundles)
    CMatrix<double> f = CMatrix<double>::Zero(6, 2);
    const double w[6] = {1.0, 2.0, 0.5, 1.5, 0.7, 3.0};
    for (Index i : {0, 2, 5})
        f(i, 0) = w[i];
    for (Index i : {1, 3, 4})
        f(i, 1) = w[i];
    const double total = f.squaredNorm();
    const auto greedy = dynamic_mapping_greedy<double>(f, 2);
    CHECK(mapping_objective<double>(f, greedy) == doctest::Approx(total));
    const auto km = dynamic_mapping_kmeans<double>(f, 2);
    CHECK(mapping_objective<double>(f, km) == doctest::Approx(total));
}

TEST_CASE("dynamic mapping: greedy and K-means versus brute force")
{
    int kmeans_hits = 0;
    for (int seed = 0; seed < 30; ++seed)
    {
        const CMatrix<double> f = oracle::random_complex(6, 3, 200 + seed);
        const double fixed = objective_oracle(f, fixed_mapping(6, 2));
        const auto greedy = dynamic_mapping_greedy<double>(f, 2);
        std::vector<double> trace;
        const auto km = dynamic_mapping_kmeans<double>(f, 2, {}, nullptr, &trace);
        CHECK_NOTHROW(validate(greedy, 6));
        CHECK_NOTHROW(validate(km, 6));
        const double g_obj = objective_oracle(f, greedy);
        const double k_obj = objective_oracle(f, km);
        CHECK(g_obj >= fixed - 1e-10);
        CHECK(k_obj >= g_obj - 1e-10);
        for (std::size_t i = 1; i < trace.size(); ++i)
            CHECK(trace[i] >= trace[i - 1]);
        const double best = oracle::best_partition(f, 2).objective;
        CHECK(k_obj <= best + 1e-10);
        if (k_obj >= best - 1e-9 * best)
            ++kmeans_hits;
    }
    MESSAGE("K-means optimal on " << kmeans_hits << "/30");
    CHECK(kmeans_hits >= 20);
}

TEST_CASE("K-means: optimal start is a fixed point")
{
    for (int seed = 0; seed < 10; ++seed)
    {
        const CMatrix<double> f = oracle::random_complex(6, 3, 300 + seed);
        const auto best = oracle::best_partition(f, 2);
        MappingSets start{best.sets};
        const auto out = dynamic_mapping_kmeans<double>(f, 2, {}, &start);
        CHECK(out == start);
    }
}

TEST_CASE("dynamic mapping objective is invariant to a common unitary right factor")
{
    const CMatrix<double> f = oracle::random_complex(8, 4, 400);
    const CMatrix<double> q = oracle::random_complex(4, 4, 401).householderQr().householderQ();
    const auto m = dynamic_mapping_greedy<double>(f, 3);
    CHECK(mapping_objective<double>(CMatrix<double>(f * q), m) ==
          doctest::Approx(mapping_objective<double>(f, m)).epsilon(1e-12));
}

TEST_CASE("Eckart-Young: no solver beats the truncated SVD")
{
    SolverSettings settings;
    for (int seed = 0; seed < 5; ++seed)
    {
        const CMatrix<double> f = oracle::random_complex(16, 3, 500 + seed);
        const double floor = approximation_residual<double>(f, dps_full_solve<double>(f, 2));
        const auto book = make_codebook<double>(oracle::random_unit_modulus(16, 12, 600 + seed));
        for (const auto &entry : algorithm_table)
        {
            if (entry.id == Algorithm::fully_digital)
                continue;
            for (int eta : {1, 2})
            {
                const auto pair = solve<double>(entry.id, f, 2, eta, settings, &book);
                CHECK_MESSAGE(approximation_residual<double>(f, pair) >= floor * (1 - 1e-9), to_string(entry.id));
            }
        }
    }
}
