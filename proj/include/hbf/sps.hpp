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

#ifndef HBF_SPS_HPP
#define HBF_SPS_HPP

#include "hbf/analog.hpp"
#include "hbf/beamformer.hpp"
#include "hbf/config.hpp"
#include "hbf/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace hbf
{

struct AltMinOptions
{
    int max_outer = 200;
    double tolerance = 1e-6; // relative objective decrease that ends the outer loop
    int max_inner = 50;      // conjugate-gradient steps per analog update
    double armijo = 1e-4;
    double backtrack = 0.5;
    int max_backtracks = 40;
    std::uint64_t seed = 0;
};

inline void validate(const AltMinOptions &o)
{
    if (!(o.tolerance > 0) || o.max_outer < 1 || o.max_inner < 1 || o.max_backtracks < 1)
        throw Error("options", "AltMin tolerance must be positive and iteration caps at least one");
    if (!(o.armijo > 0 && o.armijo < 1) || !(o.backtrack > 0 && o.backtrack < 1))
        throw Error("options", "line-search factors must lie in (0, 1)");
}

template <typename Real>
RMatrix<Real> random_phases(Index rows, Index cols, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 2.0 * pi_v<double>);
    RMatrix<Real> p(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            p(i, j) = Real(u(rng));
    return p;
}

template <typename Real>
CMatrix<Real> unit_modulus(const CMatrix<Real> &m)
{
    CMatrix<Real> out(m.rows(), m.cols());
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i)
        {
            const Real mag = std::abs(m(i, j));
            out(i, j) = mag > Real(0) ? m(i, j) / mag : Complex<Real>(1);
        }
    return out;
}

// ---- OMP ------------------------------------------------------------------------

template <typename Real = double>
struct OmpCodebook
{
    CMatrix<Real> candidates; // unit-norm columns
};

/// Codebook from steering vectors, optionally extended by an `oversample`-times
/// oversampled DFT grid (0 disables the grid).
template <typename Real>
OmpCodebook<Real> make_codebook(const CMatrix<Real> &responses, int oversample = 0)
{
    const Index n = responses.rows();
    const Index grid = oversample > 0 ? n * oversample : 0;
    OmpCodebook<Real> book;
    book.candidates.resize(n, responses.cols() + grid);
    book.candidates.leftCols(responses.cols()) = responses;
    for (Index g = 0; g < grid; ++g)
        for (Index i = 0; i < n; ++i)
            book.candidates(i, responses.cols() + g) =
                std::polar(Real(1), Real(2) * pi_v<Real> * Real(i) * Real(g) / Real(grid));
    book.candidates.colwise().normalize();
    return book;
}

namespace detail
{

template <typename Real>
BeamformerPair<Real> omp_raw(const CMatrix<Real> &f_opt, const OmpCodebook<Real> &book, Index n_rf, const Mask &mask)
{
    const CMatrix<Real> &cand = book.candidates;
    if (cand.rows() != f_opt.rows())
        throw Error("dimension", "codebook rows differ from the antenna count");
    if (cand.cols() < n_rf)
        throw Error("codebook", "codebook holds fewer candidates than RF chains");

    BeamformerPair<Real> pair;
    CMatrix<Real> analog(f_opt.rows(), n_rf);
    CMatrix<Real> digital;
    CMatrix<Real> residual = f_opt;
    std::vector<Index> chosen;
    for (Index r = 0; r < n_rf; ++r)
    {
        const RVector<Real> score = (cand.adjoint() * residual).rowwise().squaredNorm();
        Index best = 0;
        for (Index l = 1; l < score.size(); ++l)
            if (score(l) > score(best))
                best = l;
        if (std::find(chosen.begin(), chosen.end(), best) != chosen.end())
            pair.trace.repeated_selection = true;
        chosen.push_back(best);
        analog.col(r) = unit_modulus<Real>(CMatrix<Real>(cand.col(best)));

        const auto active = analog.leftCols(r + 1);
        digital = least_squares_digital<Real>(CMatrix<Real>(active), f_opt);
        residual = f_opt - active * digital;
        const Real err = residual.norm();
        pair.trace.objective.push_back(double(err * err));
        if (err > Real(0))
            residual /= err;
    }
    if (pair.trace.repeated_selection)
        pair.trace.notes.push_back("degenerate codebook: candidate selected more than once");
    pair.trace.iterations = int(n_rf);
    pair.trace.converged = true;
    pair.analog = sps_from_matrix<Real>(analog, mask);
    pair.digital = std::move(digital);
    return pair;
}

} // namespace detail

/// Greedy analog design by orthogonal matching pursuit over `codebook`;
/// power-normalized to ||F_opt||_F^2.
template <typename Real>
BeamformerPair<Real> omp_hybrid(const CMatrix<Real> &f_opt, const OmpCodebook<Real> &codebook, Index n_rf)
{
    return power_normalize(detail::omp_raw<Real>(f_opt, codebook, n_rf, full_mask(f_opt.rows(), n_rf)),
                           Real(f_opt.squaredNorm()));
}

// ---- manifold optimization --------------------------------------------------------

/// Projection of a Euclidean gradient onto the tangent space of the
/// product of complex circles at `point`: g - Re(g o conj(x)) o x.
template <typename Real>
CMatrix<Real> riemannian_gradient(const CMatrix<Real> &point, const CMatrix<Real> &euclidean_gradient)
{
    const RMatrix<Real> radial = (euclidean_gradient.array() * point.array().conjugate()).real().matrix();
    return (euclidean_gradient.array() - radial.array().template cast<Complex<Real>>() * point.array()).matrix();
}

template <typename Real>
Real analog_objective(const CMatrix<Real> &f_opt, const CMatrix<Real> &analog, const CMatrix<Real> &digital)
{
    return (f_opt - analog * digital).squaredNorm();
}

// Gradient of ||F_opt - X B||_F^2 with respect to X under the metric Re tr(A^H B).
template <typename Real>
CMatrix<Real> analog_euclidean_gradient(const CMatrix<Real> &f_opt, const CMatrix<Real> &analog,
                                        const CMatrix<Real> &digital)
{
    return Real(-2) * (f_opt - analog * digital) * digital.adjoint();
}

template <typename Real>
CMatrix<Real> retract(const CMatrix<Real> &point, const CMatrix<Real> &step)
{
    return unit_modulus<Real>(CMatrix<Real>(point + step));
}

namespace detail
{

// Polak-Ribiere conjugate gradient on the circle manifold for a fixed digital matrix.
// Returns the number of accepted steps.
template <typename Real>
int manifold_cg(CMatrix<Real> &x, const CMatrix<Real> &f_opt, const CMatrix<Real> &digital,
                const AltMinOptions &opts, SolverTrace &trace)
{
    const Real lipschitz = Real(2) * (digital * digital.adjoint()).template selfadjointView<Eigen::Lower>()
                                         .eigenvalues()
                                         .maxCoeff();
    if (!(lipschitz > Real(0)))
        return 0;

    Real cost = analog_objective<Real>(f_opt, x, digital);
    CMatrix<Real> grad = riemannian_gradient<Real>(x, analog_euclidean_gradient<Real>(f_opt, x, digital));
    CMatrix<Real> dir = -grad;
    Real step = Real(1) / lipschitz;
    int accepted = 0;
    for (int it = 0; it < opts.max_inner; ++it)
    {
        const Real grad_sq = grad.squaredNorm();
        if (!(grad_sq > Real(1e-30) * std::max(Real(1), cost)))
            break;
        Real slope = real_inner(grad, dir);
        if (!(slope < 0))
        {
            dir = -grad;
            slope = -grad_sq;
        }

        Real t = std::min(Real(2) * step, Real(16) / lipschitz);
        CMatrix<Real> candidate;
        Real candidate_cost = cost;
        bool ok = false;
        for (int b = 0; b < opts.max_backtracks; ++b)
        {
            candidate = retract<Real>(x, t * dir);
            candidate_cost = analog_objective<Real>(f_opt, candidate, digital);
            if (candidate_cost <= cost + Real(opts.armijo) * t * slope)
            {
                ok = true;
                break;
            }
            t *= Real(opts.backtrack);
        }
        if (!ok)
        {
            ++trace.line_search_failures;
            break;
        }
        step = t;
        ++accepted;

        const CMatrix<Real> new_grad =
            riemannian_gradient<Real>(candidate, analog_euclidean_gradient<Real>(f_opt, candidate, digital));
        // vector transport by projection onto the new tangent space
        const CMatrix<Real> old_grad_t = riemannian_gradient<Real>(candidate, grad);
        const CMatrix<Real> dir_t = riemannian_gradient<Real>(candidate, dir);
        const Real beta = std::max(Real(0), real_inner(new_grad, CMatrix<Real>(new_grad - old_grad_t)) / grad_sq);
        dir = -new_grad + beta * dir_t;

        const Real decrease = cost - candidate_cost;
        x = std::move(candidate);
        grad = new_grad;
        cost = candidate_cost;
        if (decrease <= Real(1e-12) * cost)
            break;
    }
    return accepted;
}

template <typename Real>
BeamformerPair<Real> mo_altmin_raw(const CMatrix<Real> &f_opt, Index n_rf, const AltMinOptions &opts,
                                   const CMatrix<Real> *start)
{
    validate(opts);
    const Index n_t = f_opt.rows();
    CMatrix<Real> x;
    if (start)
    {
        if (start->rows() != n_t || start->cols() != n_rf)
            throw Error("dimension", "initial analog matrix has the wrong shape");
        x = unit_modulus<Real>(*start);
    }
    else
    {
        x = make_sps_network<Real>(random_phases<Real>(n_t, n_rf, opts.seed), full_mask(n_t, n_rf)).matrix;
    }

    BeamformerPair<Real> pair;
    SolverTrace &trace = pair.trace;
    CMatrix<Real> digital = least_squares_digital<Real>(x, f_opt);
    Real cost = analog_objective<Real>(f_opt, x, digital);
    trace.objective.push_back(double(cost));
    const Real floor = Real(1e-28) * f_opt.squaredNorm();
    for (int outer = 0; outer < opts.max_outer && cost > floor; ++outer)
    {
        manifold_cg<Real>(x, f_opt, digital, opts, trace);
        digital = least_squares_digital<Real>(x, f_opt);
        const Real next = analog_objective<Real>(f_opt, x, digital);
        trace.objective.push_back(double(next));
        trace.iterations = outer + 1;
        const Real rel = (cost - next) / std::max(cost, std::numeric_limits<Real>::min());
        cost = next;
        if (rel < Real(opts.tolerance))
        {
            trace.converged = true;
            break;
        }
    }
    if (cost <= floor)
        trace.converged = true;
    pair.analog = sps_from_matrix<Real>(x, full_mask(n_t, n_rf));
    pair.digital = least_squares_digital<Real>(pair.analog.matrix, f_opt);
    return pair;
}

} // namespace detail

/// Manifold-optimization alternating minimization for the fully-connected SPS
/// network. Starts from `start` when given, else from random phases drawn from
/// opts.seed. Power-normalized to ||F_opt||_F^2.
template <typename Real>
BeamformerPair<Real> mo_altmin(const CMatrix<Real> &f_opt, Index n_rf, const AltMinOptions &opts = {},
                               const CMatrix<Real> *start = nullptr)
{
    return power_normalize(detail::mo_altmin_raw<Real>(f_opt, n_rf, opts, start), Real(f_opt.squaredNorm()));
}

// ---- phase extraction ---------------------------------------------------------

namespace detail
{

template <typename Real>
BeamformerPair<Real> pe_relaxation_raw(const CMatrix<Real> &f_opt, Index n_rf)
{
    const Index n_t = f_opt.rows();
    if (n_rf < 1 || n_rf > n_t)
        throw Error("dimension", "RF chain count must lie in [1, N_t]");
    Eigen::JacobiSVD<CMatrix<Real>> svd(f_opt, Eigen::ComputeFullU);
    const CMatrix<Real> u1 = svd.matrixU().leftCols(n_rf);
    BeamformerPair<Real> pair;
    pair.analog = sps_from_matrix<Real>(u1, full_mask(n_t, n_rf));
    // least-squares refinement of S_1 V_1^H for the phase-only analog matrix
    pair.digital = least_squares_digital<Real>(pair.analog.matrix, f_opt);
    pair.trace.objective.push_back(double(analog_objective<Real>(f_opt, pair.analog.matrix, pair.digital)));
    pair.trace.iterations = 1;
    pair.trace.converged = true;
    return pair;
}

} // namespace detail

/// One-shot SPS design: phases of the dominant left singular vectors of F_opt.
template <typename Real>
BeamformerPair<Real> pe_relaxation(const CMatrix<Real> &f_opt, Index n_rf)
{
    return power_normalize(detail::pe_relaxation_raw<Real>(f_opt, n_rf), Real(f_opt.squaredNorm()));
}

// ---- partially-connected AltMin ------------------------------------------------

namespace detail
{

template <typename Real>
BeamformerPair<Real> sps_partial_raw(const CMatrix<Real> &f_opt, Index n_rf, const AltMinOptions &opts)
{
    validate(opts);
    const Index n_t = f_opt.rows();
    const auto groups = contiguous_partition(n_t, n_rf);
    const Mask mask = partial_mask(n_t, n_rf);
    RMatrix<Real> phase = random_phases<Real>(n_t, 1, opts.seed);

    // digital row j = (1/|G_j|) sum_{i in G_j} conj(x_i) F_opt(i, :)
    auto digital_step = [&](CMatrix<Real> &digital) {
        digital.resize(n_rf, f_opt.cols());
        for (Index j = 0; j < n_rf; ++j)
        {
            const auto [start, size] = groups[j];
            digital.row(j).setZero();
            for (Index i = start; i < start + size; ++i)
                digital.row(j) += std::polar(Real(1), -phase(i)) * f_opt.row(i);
            digital.row(j) /= Real(size);
        }
    };
    auto cost_of = [&](const CMatrix<Real> &digital) {
        Real c = 0;
        for (Index j = 0; j < n_rf; ++j)
        {
            const auto [start, size] = groups[j];
            for (Index i = start; i < start + size; ++i)
                c += (f_opt.row(i) - std::polar(Real(1), phase(i)) * digital.row(j)).squaredNorm();
        }
        return c;
    };

    BeamformerPair<Real> pair;
    CMatrix<Real> digital;
    digital_step(digital);
    Real cost = cost_of(digital);
    pair.trace.objective.push_back(double(cost));
    const Real floor = Real(1e-28) * f_opt.squaredNorm();
    for (int outer = 0; outer < opts.max_outer && cost > floor; ++outer)
    {
        for (Index j = 0; j < n_rf; ++j)
        {
            const auto [start, size] = groups[j];
            for (Index i = start; i < start + size; ++i)
            {
                const Complex<Real> corr = f_opt.row(i).dot(digital.row(j)); // conj-linear in the first argument
                const Complex<Real> p = std::conj(corr);
                if (std::abs(p) > Real(0))
                    phase(i) = std::arg(p);
            }
        }
        digital_step(digital);
        const Real next = cost_of(digital);
        pair.trace.objective.push_back(double(next));
        pair.trace.iterations = outer + 1;
        const Real rel = (cost - next) / std::max(cost, std::numeric_limits<Real>::min());
        cost = next;
        if (rel < Real(opts.tolerance))
        {
            pair.trace.converged = true;
            break;
        }
    }
    if (cost <= floor)
        pair.trace.converged = true;

    RMatrix<Real> phases = RMatrix<Real>::Zero(n_t, n_rf);
    for (Index j = 0; j < n_rf; ++j)
        for (Index i = groups[j].first; i < groups[j].first + groups[j].second; ++i)
            phases(i, j) = phase(i);
    pair.analog = make_sps_network<Real>(phases, mask);
    pair.digital = std::move(digital);
    return pair;
}

} // namespace detail

/// Alternating minimization for the partially-connected SPS network. Antenna
/// groups are contiguous; their sizes differ by at most one when N_RF does not
/// divide N_t. The digital step is the closed-form least-squares solution and
/// the power constraint is met by a final normalization.
template <typename Real>
BeamformerPair<Real> sps_partial_altmin(const CMatrix<Real> &f_opt, Index n_rf, const AltMinOptions &opts = {})
{
    return power_normalize(detail::sps_partial_raw<Real>(f_opt, n_rf, opts), Real(f_opt.squaredNorm()));
}

} // namespace hbf

#endif
