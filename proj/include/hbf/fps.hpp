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

#ifndef HBF_FPS_HPP
#define HBF_FPS_HPP

#include "hbf/analog.hpp"
#include "hbf/beamformer.hpp"
#include "hbf/dps.hpp"
#include "hbf/sps.hpp"
#include "hbf/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace hbf
{

/// Uniform fixed-phase bank: theta_i = 2*pi*i / n_c, i = 0..n_c-1.
template <typename Real = double>
PhaseBank<Real> fps_bank_default(int n_c)
{
    if (n_c < 1)
        throw Error("fps", "phase bank needs at least one phase shifter");
    PhaseBank<Real> bank;
    bank.phases.resize(n_c);
    for (int i = 0; i < n_c; ++i)
        bank.phases(i) = Real(2) * pi_v<Real> * Real(i) / Real(n_c);
    return bank;
}

template <typename Real = double>
struct FpsProblem
{
    CMatrix<Real> target; // F_opt
    PhaseBank<Real> bank;
    Index n_rf = 0;
    Mask mask; // N_t x N_RF; empty means fully connected
};

struct FpsOptions
{
    AltMinOptions altmin;
    int exhaustive_width = 14; // rows with at most this many free switches are solved exactly
};

using BitRow = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// One antenna's switch subproblem: minimize ||y - s G||^2 over binary s, written
/// as offset - 2 r.s + s^T Q s with r = Re(G y^H), Q = Re(G G^H).
template <typename Real = double>
struct SwitchRowProblem
{
    RMatrix<Real> quad;
    RVector<Real> linear;
    Real offset = 0;
    BitRow allowed;

    Index width() const { return linear.size(); }
};

template <typename Real>
SwitchRowProblem<Real> make_switch_row(const CMatrix<Real> &g, const RMatrix<Real> &quad,
                                       const Eigen::Ref<const Eigen::Matrix<Complex<Real>, 1, Eigen::Dynamic>> &y,
                                       BitRow allowed)
{
    SwitchRowProblem<Real> p;
    p.quad = quad;
    p.linear = (g * y.adjoint()).real();
    p.offset = y.squaredNorm();
    p.allowed = std::move(allowed);
    return p;
}

template <typename Real>
Real row_cost(const SwitchRowProblem<Real> &p, const BitRow &bits)
{
    const RVector<Real> s = bits.template cast<Real>().matrix();
    return p.offset - Real(2) * p.linear.dot(s) + s.dot(p.quad * s);
}

/// Exact row optimum by Gray-code enumeration of the allowed switches.
template <typename Real>
BitRow fps_row_exhaustive(const SwitchRowProblem<Real> &p)
{
    std::vector<Index> free_bits;
    for (Index k = 0; k < p.width(); ++k)
        if (p.allowed(k))
            free_bits.push_back(k);
    const std::size_t n = free_bits.size();
    if (n > 30)
        throw Error("fps", "row too wide for exhaustive switch search");

    BitRow bits = BitRow::Constant(p.width(), false);
    BitRow best = bits;
    RVector<Real> q_s = RVector<Real>::Zero(p.width()); // Q s
    Real value = 0;                                      // s^T Q s - 2 r.s
    Real best_value = 0;
    const std::uint64_t states = std::uint64_t(1) << n;
    for (std::uint64_t g = 1; g < states; ++g)
    {
        const Index k = free_bits[static_cast<std::size_t>(__builtin_ctzll(g))];
        if (!bits(k))
        {
            value += p.quad(k, k) - Real(2) * p.linear(k) + Real(2) * q_s(k);
            bits(k) = true;
            q_s += p.quad.col(k);
        }
        else
        {
            q_s -= p.quad.col(k);
            value -= p.quad(k, k) - Real(2) * p.linear(k) + Real(2) * q_s(k);
            bits(k) = false;
        }
        if (value < best_value)
        {
            best_value = value;
            best = bits;
        }
    }
    return best;
}

/// Start for the local search: least-squares solution of the real relaxation, thresholded at 0.5.
template <typename Real>
BitRow fps_row_relaxed_start(const SwitchRowProblem<Real> &p)
{
    std::vector<Index> free_bits;
    for (Index k = 0; k < p.width(); ++k)
        if (p.allowed(k))
            free_bits.push_back(k);
    BitRow bits = BitRow::Constant(p.width(), false);
    if (free_bits.empty())
        return bits;
    const Index n = Index(free_bits.size());
    RMatrix<Real> q(n, n);
    RVector<Real> r(n);
    for (Index a = 0; a < n; ++a)
    {
        r(a) = p.linear(free_bits[a]);
        for (Index b = 0; b < n; ++b)
            q(a, b) = p.quad(free_bits[a], free_bits[b]);
    }
    const RVector<Real> z = q.completeOrthogonalDecomposition().solve(r);
    for (Index a = 0; a < n; ++a)
        bits(free_bits[a]) = z(a) > Real(0.5);
    return bits;
}

/// Best-improvement descent over single and paired switch flips; stops at a
/// point no such move improves. Every accepted move strictly lowers the cost.
template <typename Real>
BitRow fps_row_local_search(const SwitchRowProblem<Real> &p, BitRow bits)
{
    std::vector<Index> free_bits;
    for (Index k = 0; k < p.width(); ++k)
    {
        if (p.allowed(k))
            free_bits.push_back(k);
        else
            bits(k) = false;
    }
    const std::size_t n = free_bits.size();
    RVector<Real> q_s = p.quad * bits.template cast<Real>().matrix();
    std::vector<Real> delta(n);
    std::vector<Real> dir(n);
    const Real eps = Real(64) * std::numeric_limits<Real>::epsilon() * std::max(Real(1), p.offset);
    for (int guard = 0; guard < 100000; ++guard)
    {
        // cost change of flipping each free bit alone
        for (std::size_t a = 0; a < n; ++a)
        {
            const Index k = free_bits[a];
            dir[a] = bits(k) ? Real(-1) : Real(1);
            const Real others = q_s(k) - (bits(k) ? p.quad(k, k) : Real(0));
            delta[a] = dir[a] * (p.quad(k, k) - Real(2) * p.linear(k) + Real(2) * others);
        }
        Real best = -eps;
        std::size_t pick_a = n, pick_b = n;
        for (std::size_t a = 0; a < n; ++a)
            if (delta[a] < best)
            {
                best = delta[a];
                pick_a = a;
                pick_b = n;
            }
        if (pick_a == n)
        {
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = a + 1; b < n; ++b)
                {
                    const Real d = delta[a] + delta[b] +
                                   Real(2) * dir[a] * dir[b] * p.quad(free_bits[a], free_bits[b]);
                    if (d < best)
                    {
                        best = d;
                        pick_a = a;
                        pick_b = b;
                    }
                }
        }
        if (pick_a == n)
            break;
        for (std::size_t x : {pick_a, pick_b})
        {
            if (x == n)
                continue;
            const Index k = free_bits[x];
            bits(k) = !bits(k);
            q_s += dir[x] * p.quad.col(k);
        }
    }
    return bits;
}

namespace detail
{

template <typename Real>
Real bank_peak_modulus(const PhaseBank<Real> &bank)
{
    const CVector<Real> c = bank.vector();
    Real best = 0;
    const int directions = 720;
    for (int d = 0; d < directions; ++d)
    {
        const Real phi = Real(2) * pi_v<Real> * Real(d) / Real(directions);
        Complex<Real> sum(0);
        for (Index n = 0; n < c.size(); ++n)
            if (std::cos(bank.phases(n) - phi) > Real(0))
                sum += c(n);
        best = std::max(best, std::abs(sum));
    }
    return best > Real(0) ? best : std::abs(c(0));
}

template <typename Real>
BitRow allowed_bits(const Mask &mask, Index row, Index n_c)
{
    BitRow a(mask.cols() * n_c);
    for (Index j = 0; j < mask.cols(); ++j)
        a.segment(j * n_c, n_c).setConstant(mask(row, j));
    return a;
}

template <typename Real>
Real fps_cost(const CMatrix<Real> &f_opt, const Mask &bits, const CMatrix<Real> &c, const CMatrix<Real> &digital)
{
    const CMatrix<Real> analog = bits.template cast<Real>().matrix().template cast<Complex<Real>>() * c;
    return analog_objective<Real>(f_opt, analog, digital);
}

template <typename Real>
BeamformerPair<Real> fps_altmin_raw(const FpsProblem<Real> &problem, const FpsOptions &opts)
{
    validate(opts.altmin);
    const CMatrix<Real> &f_opt = problem.target;
    const Index n_t = f_opt.rows();
    const Index n_rf = problem.n_rf;
    const Index n_c = problem.bank.size();
    if (n_rf < 1 || n_c < 1)
        throw Error("fps", "FPS needs at least one RF chain and one phase shifter");
    const Mask mask = problem.mask.size() == 0 ? full_mask(n_t, n_rf) : problem.mask;
    if (mask.rows() != n_t || mask.cols() != n_rf)
        throw Error("dimension", "FPS mask shape does not match the target");
    const CMatrix<Real> c = problem.bank.block_matrix(n_rf);
    const Index width = n_c * n_rf;

    std::vector<BitRow> allowed;
    allowed.reserve(static_cast<std::size_t>(n_t));
    for (Index i = 0; i < n_t; ++i)
        allowed.push_back(allowed_bits<Real>(mask, i, n_c));

    Mask s = Mask::Constant(n_t, width, false);
    auto switch_step = [&](const CMatrix<Real> &digital) {
        const CMatrix<Real> g = c * digital;
        const RMatrix<Real> quad = (g * g.adjoint()).real();
        for (Index i = 0; i < n_t; ++i)
        {
            const auto row = make_switch_row<Real>(g, quad, f_opt.row(i), allowed[i]);
            const BitRow current = s.row(i).transpose();
            BitRow chosen;
            if (row.allowed.count() <= opts.exhaustive_width)
            {
                chosen = fps_row_exhaustive<Real>(row);
            }
            else
            {
                chosen = fps_row_local_search<Real>(row, fps_row_relaxed_start<Real>(row));
                const BitRow alt = fps_row_local_search<Real>(row, current);
                if (row_cost<Real>(row, alt) < row_cost<Real>(row, chosen))
                    chosen = alt;
            }
            if (row_cost<Real>(row, chosen) < row_cost<Real>(row, current))
                s.row(i) = chosen.transpose();
        }
    };
    auto reseed_if_dark = [&](const CMatrix<Real> &digital) {
        if (s.any())
            return false;
        const CMatrix<Real> g = c * digital;
        const RMatrix<Real> quad = (g * g.adjoint()).real();
        for (Index i = 0; i < n_t; ++i)
        {
            const auto row = make_switch_row<Real>(g, quad, f_opt.row(i), allowed[i]);
            Index best = -1;
            Real best_cost = std::numeric_limits<Real>::infinity();
            for (Index k = 0; k < width; ++k)
            {
                if (!row.allowed(k))
                    continue;
                BitRow one = BitRow::Constant(width, false);
                one(k) = true;
                const Real cost = row_cost<Real>(row, one);
                if (cost < best_cost)
                {
                    best_cost = cost;
                    best = k;
                }
            }
            if (best >= 0)
                s(i, best) = true;
        }
        return true;
    };

    BeamformerPair<Real> pair;
    SolverTrace &trace = pair.trace;

    // Warm start: quantize a scaled copy of the closed-form DPS analog matrix.
    {
        CMatrix<Real> seed_analog = dps_full_solve<Real>(f_opt, n_rf).analog.matrix;
        seed_analog *= bank_peak_modulus<Real>(problem.bank) / Real(2);
        for (Index j = 0; j < n_rf; ++j)
            for (Index i = 0; i < n_t; ++i)
                if (!mask(i, j))
                    seed_analog(i, j) = 0;
        switch_step(least_squares_digital<Real>(seed_analog, f_opt));
    }
    CMatrix<Real> digital = least_squares_digital<Real>(
        CMatrix<Real>(s.template cast<Real>().matrix().template cast<Complex<Real>>() * c), f_opt);
    if (reseed_if_dark(digital))
    {
        trace.notes.push_back("switch matrix was all zero; reseeded every row with its best single switch");
        digital = least_squares_digital<Real>(
            CMatrix<Real>(s.template cast<Real>().matrix().template cast<Complex<Real>>() * c), f_opt);
    }
    Real cost = fps_cost<Real>(f_opt, s, c, digital);
    trace.objective.push_back(double(cost));
    const Real floor = Real(1e-28) * f_opt.squaredNorm();
    for (int outer = 0; outer < opts.altmin.max_outer && cost > floor; ++outer)
    {
        switch_step(digital);
        digital = least_squares_digital<Real>(
            CMatrix<Real>(s.template cast<Real>().matrix().template cast<Complex<Real>>() * c), f_opt);
        const Real next = fps_cost<Real>(f_opt, s, c, digital);
        trace.objective.push_back(double(next));
        trace.iterations = outer + 1;
        const Real rel = (cost - next) / std::max(cost, std::numeric_limits<Real>::min());
        cost = next;
        if (rel < Real(opts.altmin.tolerance))
        {
            trace.converged = true;
            break;
        }
    }
    if (cost <= floor)
        trace.converged = true;

    pair.analog = make_fps_network<Real>(SwitchMatrix{s}, problem.bank, mask);
    pair.digital = std::move(digital);
    return pair;
}

} // namespace detail

/// Alternating minimization of ||F_opt - S C F_BB||_F^2 over the binary switch
/// matrix S and the digital matrix, for a fixed phase bank. Rows with at most
/// `exhaustive_width` free switches are solved exactly; wider rows use a
/// bit-flip local search. Power-normalized to ||F_opt||_F^2.
template <typename Real>
BeamformerPair<Real> fps_altmin(const FpsProblem<Real> &problem, const FpsOptions &opts = {})
{
    return power_normalize(detail::fps_altmin_raw<Real>(problem, opts), Real(problem.target.squaredNorm()));
}

} // namespace hbf

#endif
