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

#ifndef HBF_ANALOG_HPP
#define HBF_ANALOG_HPP

#include "hbf/config.hpp"
#include "hbf/types.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hbf
{

// ---- masks ---------------------------------------------------------------

inline Mask full_mask(Index n_t, Index n_rf) { return Mask::Constant(n_t, n_rf, true); }

// Block-diagonal connectivity with `groups` contiguous antenna and RF-chain blocks.
// Antenna blocks may differ in size by one; RF-chain blocks must be equal.
inline Mask group_mask(Index n_t, Index n_rf, Index groups)
{
    if (groups < 1 || n_rf % groups != 0)
        throw Error("dimension", "group count must divide the RF chain count");
    Mask m = Mask::Constant(n_t, n_rf, false);
    const auto rows = contiguous_partition(n_t, groups);
    const Index chains = n_rf / groups;
    for (Index g = 0; g < groups; ++g)
        m.block(rows[g].first, g * chains, rows[g].second, chains).setConstant(true);
    return m;
}

inline Mask partial_mask(Index n_t, Index n_rf) { return group_mask(n_t, n_rf, n_rf); }

inline Mask mask_for(const Mapping &mapping, Index n_t, Index n_rf)
{
    switch (mapping.kind)
    {
    case MappingKind::fully:
        return full_mask(n_t, n_rf);
    case MappingKind::partially:
        return partial_mask(n_t, n_rf);
    case MappingKind::group:
        return group_mask(n_t, n_rf, mapping.eta);
    }
    return full_mask(n_t, n_rf);
}

// ---- phase bank / switches ------------------------------------------------

template <typename Real = double>
struct PhaseBank
{
    RVector<Real> phases;

    int size() const { return int(phases.size()); }

    // c = exp(j*theta) / sqrt(N_c)
    CVector<Real> vector() const
    {
        const Real scale = Real(1) / std::sqrt(Real(phases.size()));
        CVector<Real> c(phases.size());
        for (Index i = 0; i < phases.size(); ++i)
            c(i) = std::polar(scale, phases(i));
        return c;
    }

    // C = blkdiag(c, ..., c), (N_c * n_rf) x n_rf.
    CMatrix<Real> block_matrix(Index n_rf) const
    {
        const CVector<Real> c = vector();
        const Index n_c = c.size();
        CMatrix<Real> out = CMatrix<Real>::Zero(n_c * n_rf, n_rf);
        for (Index j = 0; j < n_rf; ++j)
            out.block(j * n_c, j, n_c, 1) = c;
        return out;
    }
};

struct SwitchMatrix
{
    Mask bits; // N_t x (N_c * N_RF)
};

// ---- double phase shifter split --------------------------------------------

inline constexpr double dps_amplitude_slack = 1e-12;

/// Splits a with |a| <= 2 into two unit-modulus terms: exp(j*phi) + exp(j*theta) = a.
/// phi = arg(a) + acos(|a|/2), theta = arg(a) - acos(|a|/2), with arg(0) taken as 0.
template <typename Real>
std::pair<Real, Real> dps_phase_split(const Complex<Real> &a)
{
    Real mag = std::abs(a);
    if (!(mag <= Real(2) + Real(dps_amplitude_slack)))
        throw Error("domain", "double phase shifter entry has modulus above 2");
    mag = std::min(mag, Real(2));
    const Real angle = mag > Real(0) ? std::arg(a) : Real(0);
    const Real spread = std::acos(mag / Real(2));
    return {angle + spread, angle - spread};
}

// ---- analog network -----------------------------------------------------------

template <typename Real = double>
struct SpsPayload
{
    RMatrix<Real> phases; // zero off-mask
};

template <typename Real = double>
struct DpsPayload
{
    RMatrix<Real> phi;
    RMatrix<Real> theta;
};

template <typename Real = double>
struct FpsPayload
{
    SwitchMatrix switches;
    PhaseBank<Real> bank;
};

struct UnconstrainedPayload
{
};

template <typename Real = double>
struct AnalogNetwork
{
    CMatrix<Real> matrix; // N_t x N_RF
    Mask mask;
    std::variant<SpsPayload<Real>, DpsPayload<Real>, FpsPayload<Real>, UnconstrainedPayload> payload;

    Index antennas() const { return matrix.rows(); }
    Index chains() const { return matrix.cols(); }

    ImplementationKind implementation() const
    {
        switch (payload.index())
        {
        case 0:
            return ImplementationKind::sps;
        case 1:
            return ImplementationKind::dps;
        case 2:
            return ImplementationKind::fps;
        default:
            return ImplementationKind::unconstrained;
        }
    }
};

template <typename Real>
AnalogNetwork<Real> make_sps_network(const RMatrix<Real> &phases, const Mask &mask)
{
    if (phases.rows() != mask.rows() || phases.cols() != mask.cols())
        throw Error("dimension", "phase matrix and mask differ in shape");
    AnalogNetwork<Real> net;
    net.mask = mask;
    net.matrix = CMatrix<Real>::Zero(phases.rows(), phases.cols());
    RMatrix<Real> stored = RMatrix<Real>::Zero(phases.rows(), phases.cols());
    for (Index j = 0; j < phases.cols(); ++j)
        for (Index i = 0; i < phases.rows(); ++i)
            if (mask(i, j))
            {
                stored(i, j) = phases(i, j);
                net.matrix(i, j) = std::polar(Real(1), phases(i, j));
            }
    net.payload = SpsPayload<Real>{std::move(stored)};
    return net;
}

// Projects each masked entry onto the unit circle (zero maps to phase 0).
template <typename Real>
AnalogNetwork<Real> sps_from_matrix(const CMatrix<Real> &values, const Mask &mask)
{
    RMatrix<Real> phases(values.rows(), values.cols());
    for (Index j = 0; j < values.cols(); ++j)
        for (Index i = 0; i < values.rows(); ++i)
            phases(i, j) = std::abs(values(i, j)) > Real(0) ? std::arg(values(i, j)) : Real(0);
    return make_sps_network<Real>(phases, mask);
}

template <typename Real>
AnalogNetwork<Real> make_dps_network(const CMatrix<Real> &values, const Mask &mask)
{
    if (values.rows() != mask.rows() || values.cols() != mask.cols())
        throw Error("dimension", "analog matrix and mask differ in shape");
    AnalogNetwork<Real> net;
    net.mask = mask;
    net.matrix = CMatrix<Real>::Zero(values.rows(), values.cols());
    DpsPayload<Real> p{RMatrix<Real>::Zero(values.rows(), values.cols()),
                       RMatrix<Real>::Zero(values.rows(), values.cols())};
    for (Index j = 0; j < values.cols(); ++j)
        for (Index i = 0; i < values.rows(); ++i)
            if (mask(i, j))
            {
                const auto [phi, theta] = dps_phase_split(values(i, j));
                p.phi(i, j) = phi;
                p.theta(i, j) = theta;
                net.matrix(i, j) = std::polar(Real(1), phi) + std::polar(Real(1), theta);
            }
    net.payload = std::move(p);
    return net;
}

template <typename Real>
AnalogNetwork<Real> make_fps_network(const SwitchMatrix &s, const PhaseBank<Real> &bank, const Mask &mask)
{
    const Index n_c = bank.size();
    const Index n_rf = mask.cols();
    if (s.bits.rows() != mask.rows() || s.bits.cols() != n_c * n_rf)
        throw Error("dimension", "switch matrix shape does not match bank size and RF chain count");
    AnalogNetwork<Real> net;
    net.mask = mask;
    net.matrix = s.bits.template cast<Real>().matrix().template cast<Complex<Real>>() * bank.block_matrix(n_rf);
    net.payload = FpsPayload<Real>{s, bank};
    return net;
}

template <typename Real>
AnalogNetwork<Real> make_unconstrained_network(const CMatrix<Real> &values)
{
    AnalogNetwork<Real> net;
    net.matrix = values;
    net.mask = Mask::Constant(values.rows(), values.cols(), true);
    net.payload = UnconstrainedPayload{};
    return net;
}

/// Checks the structural invariants of an analog network; on failure writes
/// the reason into `why` when given.
template <typename Real>
bool satisfies_invariants(const AnalogNetwork<Real> &net, Real tol = Real(1e-12), std::string *why = nullptr)
{
    auto fail = [&](const std::string &reason) {
        if (why)
            *why = reason;
        return false;
    };
    if (net.mask.rows() != net.matrix.rows() || net.mask.cols() != net.matrix.cols())
        return fail("mask shape");
    for (Index j = 0; j < net.matrix.cols(); ++j)
        for (Index i = 0; i < net.matrix.rows(); ++i)
            if (!net.mask(i, j) && net.matrix(i, j) != Complex<Real>(0))
                return fail("nonzero entry off the mask");

    if (const auto *sps = std::get_if<SpsPayload<Real>>(&net.payload))
    {
        (void)sps;
        for (Index j = 0; j < net.matrix.cols(); ++j)
            for (Index i = 0; i < net.matrix.rows(); ++i)
                if (net.mask(i, j) && std::abs(std::abs(net.matrix(i, j)) - Real(1)) > tol)
                    return fail("SPS entry without unit modulus");
    }
    else if (const auto *dps = std::get_if<DpsPayload<Real>>(&net.payload))
    {
        for (Index j = 0; j < net.matrix.cols(); ++j)
            for (Index i = 0; i < net.matrix.rows(); ++i)
            {
                if (!net.mask(i, j))
                    continue;
                const auto sum = std::polar(Real(1), dps->phi(i, j)) + std::polar(Real(1), dps->theta(i, j));
                if (std::abs(net.matrix(i, j)) > Real(2) + tol || std::abs(sum - net.matrix(i, j)) > tol)
                    return fail("DPS entry is not the sum of its two phase terms");
            }
    }
    else if (const auto *fps = std::get_if<FpsPayload<Real>>(&net.payload))
    {
        const Index n_rf = net.matrix.cols();
        const CMatrix<Real> sc =
            fps->switches.bits.template cast<Real>().matrix().template cast<Complex<Real>>() *
            fps->bank.block_matrix(n_rf);
        if ((sc - net.matrix).cwiseAbs().maxCoeff() > tol)
            return fail("FPS matrix differs from S*C");
        const Index n_c = fps->bank.size();
        for (Index j = 0; j < n_rf; ++j)
            for (Index i = 0; i < net.matrix.rows(); ++i)
                if (!net.mask(i, j) && fps->switches.bits.block(i, j * n_c, 1, n_c).any())
                    return fail("switch closed outside the mask");
    }
    return true;
}

} // namespace hbf

#endif
