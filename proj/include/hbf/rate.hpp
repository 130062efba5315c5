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

#ifndef HBF_RATE_HPP
#define HBF_RATE_HPP

#include "hbf/beamformer.hpp"
#include "hbf/channels.hpp"
#include "hbf/types.hpp"

#include <cmath>
#include <vector>

namespace hbf
{

struct RateReport
{
    double bits_per_hz = 0.0; // mean over users and subcarriers
    int ridge_events = 0;     // times R_int needed the 1e-12 diagonal ridge
};

inline constexpr double interference_ridge = 1e-12;

/// Gaussian-signaling rate with interference treated as noise through the combiner:
/// mean over (k, f) of log2 det(I + R^-1 (rho/(K N_s)) W^H H F_k F_k^H H^H W),
/// R = W^H W + (rho/(K N_s)) sum_{j != k} W^H H F_j F_j^H H^H W, unit noise variance.
///
/// `precoder` is the product F_RF F_BB (N_t x K N_s F); `combiners[k]` is N_r x N_s F.
template <typename Real>
RateReport spectral_efficiency(const ChannelSet<Real> &ch, const CMatrix<Real> &precoder,
                               const std::vector<CMatrix<Real>> &combiners, int n_s, double snr_db)
{
    const int K = ch.users;
    const int F = ch.subcarriers();
    if (precoder.rows() != ch.tx.count || precoder.cols() != Index(K) * F * n_s || int(combiners.size()) != K)
        throw Error("dimension", "beamformer shapes do not match the channel set");
    for (const auto &w : combiners)
        if (w.rows() != ch.rx.count || w.cols() != Index(F) * n_s)
            throw Error("dimension", "combiner shape does not match the channel set");

    const Real rho = Real(std::pow(10.0, snr_db / 10.0));
    const Real per_stream = rho / Real(K * n_s);
    RateReport report;
    double total = 0.0;
    for (int k = 0; k < K; ++k)
    {
        for (int f = 0; f < F; ++f)
        {
            const CMatrix<Real> w = combiners[k].middleCols(Index(f) * n_s, n_s);
            const CMatrix<Real> wh = w.adjoint() * ch(k, f);
            CMatrix<Real> interference = w.adjoint() * w;
            CMatrix<Real> signal;
            for (int j = 0; j < K; ++j)
            {
                const CMatrix<Real> g = wh * precoder.middleCols((Index(j) * F + f) * n_s, n_s);
                if (j == k)
                    signal = per_stream * g * g.adjoint();
                else
                    interference.noalias() += per_stream * g * g.adjoint();
            }
            Eigen::LDLT<CMatrix<Real>> ldlt(interference);
            if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().real().minCoeff() > Real(0)))
            {
                interference.diagonal().array() += Complex<Real>(Real(interference_ridge));
                ldlt.compute(interference);
                ++report.ridge_events;
            }
            // det(I + R^-1 S) = det(R + S) / det(R); both Hermitian positive definite.
            const CMatrix<Real> total_cov = interference + signal;
            Eigen::LDLT<CMatrix<Real>> ldlt_total(total_cov);
            const double log_num = ldlt_total.vectorD().real().array().log().sum();
            const double log_den = ldlt.vectorD().real().array().log().sum();
            const double rate = (log_num - log_den) / std::log(2.0);
            total += std::max(0.0, rate);
        }
    }
    report.bits_per_hz = total / double(K * F);
    return report;
}

template <typename Real>
RateReport spectral_efficiency(const ChannelSet<Real> &ch, const BeamformerPair<Real> &tx,
                               const std::vector<BeamformerPair<Real>> &rx, int n_s, double snr_db)
{
    std::vector<CMatrix<Real>> w;
    w.reserve(rx.size());
    for (const auto &pair : rx)
        w.push_back(pair.product());
    return spectral_efficiency<Real>(ch, tx.product(), w, n_s, snr_db);
}

} // namespace hbf

#endif
