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

#ifndef HBF_DIGITAL_HPP
#define HBF_DIGITAL_HPP

#include "hbf/channels.hpp"
#include "hbf/config.hpp"
#include "hbf/types.hpp"

#include <algorithm>
#include <vector>

namespace hbf
{

namespace detail
{

template <typename Real>
Index numerical_rank(const RVector<Real> &singular_values, Index rows, Index cols)
{
    if (singular_values.size() == 0)
        return 0;
    const Real tol = singular_values(0) * Real(std::max(rows, cols)) * Eigen::NumTraits<Real>::epsilon();
    Index r = 0;
    while (r < singular_values.size() && singular_values(r) > tol)
        ++r;
    return r;
}

template <typename Real>
void require_rank(const RVector<Real> &s, Index needed, const char *what)
{
    const Real floor = Real(1e-10) * std::max(Real(1), s.size() ? s(0) : Real(0));
    if (s.size() < needed || !(s(needed - 1) > floor))
        throw Error("rank-deficient", std::string(what) + ": fewer usable dimensions than streams");
}

// Dominant right singular vectors of h, `n` columns.
template <typename Real>
CMatrix<Real> dominant_right(const CMatrix<Real> &h, Index n, const char *what)
{
    Eigen::JacobiSVD<CMatrix<Real>> svd(h, Eigen::ComputeFullV);
    require_rank<Real>(svd.singularValues(), n, what);
    return svd.matrixV().leftCols(n);
}

} // namespace detail

/// Fully digital transmit beamformer F_opt (N_t x K N_s F), columns ordered
/// user-major then subcarrier, every column unit norm so ||F_opt||_F^2 = K N_s F.
///
/// One user: dominant right singular vectors per subcarrier. Several users:
/// block diagonalization, with a regularized projection when the other
/// users leave too small a null space.
template <typename Real>
CMatrix<Real> fully_digital_beamformer(const ChannelSet<Real> &ch, const HybridConfig &cfg)
{
    const int K = ch.users;
    const int F = ch.subcarriers();
    const Index n_t = ch.tx.count;
    const Index n_r = ch.rx.count;
    const Index n_s = cfg.n_s;
    if (K != cfg.k_users || F != cfg.subcarriers || n_t != cfg.n_t || n_r != cfg.n_r)
        throw Error("dimension", "channel set does not match the configuration");

    CMatrix<Real> f_opt(n_t, Index(K) * F * n_s);
    for (int k = 0; k < K; ++k)
    {
        for (int f = 0; f < F; ++f)
        {
            const CMatrix<Real> &h = ch(k, f);
            CMatrix<Real> block;
            if (K == 1)
            {
                block = detail::dominant_right<Real>(h, n_s, "fully digital beamformer");
            }
            else
            {
                CMatrix<Real> others((K - 1) * n_r, n_t);
                for (int j = 0, row = 0; j < K; ++j)
                    if (j != k)
                    {
                        others.middleRows(row, n_r) = ch(j, f);
                        row += n_r;
                    }
                Eigen::JacobiSVD<CMatrix<Real>> svd_o(others, Eigen::ComputeFullV);
                const Index r = detail::numerical_rank<Real>(svd_o.singularValues(), others.rows(), others.cols());
                if (n_t - r >= n_s)
                {
                    const CMatrix<Real> null_basis = svd_o.matrixV().rightCols(n_t - r);
                    const CMatrix<Real> effective = h * null_basis;
                    block = null_basis * detail::dominant_right<Real>(effective, n_s, "block diagonalization");
                }
                else
                {
                    // I - H~^H (H~ H~^H + I)^-1 H~
                    const CMatrix<Real> gram =
                        others * others.adjoint() + CMatrix<Real>::Identity(others.rows(), others.rows());
                    const CMatrix<Real> proj = CMatrix<Real>::Identity(n_t, n_t) -
                                               others.adjoint() * gram.ldlt().solve(others);
                    block = proj * detail::dominant_right<Real>(CMatrix<Real>(h * proj), n_s,
                                                                 "regularized block diagonalization");
                }
            }
            block.colwise().normalize();
            f_opt.middleCols((Index(k) * F + f) * n_s, n_s) = block;
        }
    }
    return f_opt;
}

/// Per-user fully digital combiners W_k = [W_{k,1}, ..., W_{k,F}] (N_r x N_s F):
/// dominant left singular vectors of the effective channel H_{k,f} F_{k,f}.
template <typename Real>
std::vector<CMatrix<Real>> fully_digital_combiners(const ChannelSet<Real> &ch, const CMatrix<Real> &precoder,
                                                   int n_s)
{
    const int K = ch.users;
    const int F = ch.subcarriers();
    const Index n_r = ch.rx.count;
    if (precoder.rows() != ch.tx.count || precoder.cols() != Index(K) * F * n_s)
        throw Error("dimension", "precoder shape does not match the channel set");
    std::vector<CMatrix<Real>> out;
    out.reserve(K);
    for (int k = 0; k < K; ++k)
    {
        CMatrix<Real> w(n_r, Index(F) * n_s);
        for (int f = 0; f < F; ++f)
        {
            const CMatrix<Real> effective = ch(k, f) * precoder.middleCols((Index(k) * F + f) * n_s, n_s);
            Eigen::JacobiSVD<CMatrix<Real>> svd(effective, Eigen::ComputeFullU);
            w.middleCols(Index(f) * n_s, n_s) = svd.matrixU().leftCols(n_s);
        }
        out.push_back(std::move(w));
    }
    return out;
}

} // namespace hbf

#endif
