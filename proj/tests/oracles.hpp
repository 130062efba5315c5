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

// Independent reference computations for the test suites. Nothing here calls
// into the solver paths it is used to check.

#ifndef HBF_TESTS_ORACLES_HPP
#define HBF_TESTS_ORACLES_HPP

#include "hbf/types.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace oracle
{

using hbf::CMatrix;
using hbf::CVector;
using hbf::Index;
using cd = std::complex<double>;

inline CMatrix<double> random_complex(Index rows, Index cols, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    CMatrix<double> m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            m(i, j) = cd(n(rng), n(rng)) / std::sqrt(2.0);
    return m;
}

inline CMatrix<double> random_unit_modulus(Index rows, Index cols, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
    CMatrix<double> m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            m(i, j) = std::polar(1.0, u(rng));
    return m;
}

// Singular values (descending) from the eigenvalues of the smaller Gram matrix.
inline Eigen::VectorXd singular_values_by_gram(const CMatrix<double> &a)
{
    const CMatrix<double> gram = a.rows() <= a.cols() ? CMatrix<double>(a * a.adjoint())
                                                      : CMatrix<double>(a.adjoint() * a);
    Eigen::SelfAdjointEigenSolver<CMatrix<double>> es(gram, Eigen::EigenvaluesOnly);
    Eigen::VectorXd ev = es.eigenvalues().reverse();
    for (Index i = 0; i < ev.size(); ++i)
        ev(i) = std::sqrt(std::max(0.0, ev(i)));
    return ev;
}

// lambda_1 of sum_{i in rows} y_i y_i^H with y_i = F(i,:)^T.
inline double top_eigenvalue(const CMatrix<double> &f, const std::vector<Index> &rows)
{
    CMatrix<double> r = CMatrix<double>::Zero(f.cols(), f.cols());
    for (Index i : rows)
    {
        const CVector<double> y = f.row(i).transpose();
        r += y * y.adjoint();
    }
    Eigen::SelfAdjointEigenSolver<CMatrix<double>> es(r, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

struct Partition
{
    std::vector<std::vector<Index>> sets;
    double objective = -1;
};

// Exhaustive search of sum_j lambda_1 over every partition of the rows into n_rf nonempty sets.
inline Partition best_partition(const CMatrix<double> &f, int n_rf)
{
    const Index n = f.rows();
    Partition best;
    std::vector<int> label(static_cast<std::size_t>(n), 0);
    std::uint64_t total = 1;
    for (Index i = 0; i < n; ++i)
        total *= std::uint64_t(n_rf);
    for (std::uint64_t code = 0; code < total; ++code)
    {
        std::uint64_t c = code;
        for (Index i = 0; i < n; ++i)
        {
            label[i] = int(c % n_rf);
            c /= n_rf;
        }
        std::vector<std::vector<Index>> sets(static_cast<std::size_t>(n_rf));
        for (Index i = 0; i < n; ++i)
            sets[label[i]].push_back(i);
        if (std::any_of(sets.begin(), sets.end(), [](const auto &s) { return s.empty(); }))
            continue;
        double obj = 0;
        for (const auto &s : sets)
            obj += top_eigenvalue(f, s);
        if (obj > best.objective)
            best = {sets, obj};
    }
    return best;
}

// Exhaustive minimum of ||y - s G||^2 over binary s by direct residual evaluation.
inline double best_switch_row(const CMatrix<double> &g, const Eigen::RowVectorXcd &y, std::vector<int> *arg = nullptr)
{
    const Index w = g.rows();
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t code = 0; code < (std::uint64_t(1) << w); ++code)
    {
        Eigen::RowVectorXcd approx = Eigen::RowVectorXcd::Zero(g.cols());
        for (Index k = 0; k < w; ++k)
            if (code >> k & 1)
                approx += g.row(k);
        const double cost = (y - approx).squaredNorm();
        if (cost < best)
        {
            best = cost;
            if (arg)
            {
                arg->assign(static_cast<std::size_t>(w), 0);
                for (Index k = 0; k < w; ++k)
                    (*arg)[k] = int(code >> k & 1);
            }
        }
    }
    return best;
}

// Residual of projecting f onto span(a), via Householder QR.
inline double projection_residual(const CMatrix<double> &a, const CMatrix<double> &f)
{
    Eigen::HouseholderQR<CMatrix<double>> qr(a);
    const CMatrix<double> q = qr.householderQ() * CMatrix<double>::Identity(a.rows(), a.cols());
    return (f - q * (q.adjoint() * f)).norm();
}

} // namespace oracle

#endif
