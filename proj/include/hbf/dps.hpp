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

#ifndef HBF_DPS_HPP
#define HBF_DPS_HPP

#include "hbf/analog.hpp"
#include "hbf/beamformer.hpp"
#include "hbf/config.hpp"
#include "hbf/types.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace hbf
{

/// Closed-form double-phase-shifter design for the fully-connected mapping.
///
/// The product is the rank-n_rf truncated SVD U1 S1 V1^H of F_opt, so the
/// residual equals the tail singular-value energy. Each analog column is a
/// left singular vector scaled to peak modulus 2; singular values live in
/// the digital matrix. The result already satisfies ||F_RF F_BB|| <= ||F_opt||.
template <typename Real>
BeamformerPair<Real> dps_full_solve(const CMatrix<Real> &f_opt, Index n_rf)
{
    const Index n_t = f_opt.rows();
    const Index m = f_opt.cols();
    if (n_rf < 1 || n_rf > n_t)
        throw Error("dimension", "RF chain count must lie in [1, N_t]");
    Eigen::JacobiSVD<CMatrix<Real>> svd(f_opt, Eigen::ComputeFullU | Eigen::ComputeThinV);
    const auto &s = svd.singularValues();

    CMatrix<Real> analog(n_t, n_rf);
    CMatrix<Real> digital = CMatrix<Real>::Zero(n_rf, m);
    for (Index j = 0; j < n_rf; ++j)
    {
        const auto u = svd.matrixU().col(j);
        const Real scale = Real(2) / u.cwiseAbs().maxCoeff();
        analog.col(j) = scale * u;
        if (j < s.size())
            digital.row(j) = (s(j) / scale) * svd.matrixV().col(j).adjoint();
    }
    BeamformerPair<Real> pair;
    pair.analog = make_dps_network<Real>(analog, full_mask(n_t, n_rf));
    pair.digital = std::move(digital);
    const Real r = approximation_residual<Real>(f_opt, pair);
    pair.trace.objective.push_back(double(r * r));
    pair.trace.iterations = 1;
    pair.trace.converged = true;
    return pair;
}

// ---- mappings -------------------------------------------------------------------

// Disjoint antenna index sets, one per RF chain, covering 0..N_t-1.
struct MappingSets
{
    std::vector<std::vector<Index>> sets;

    Index chains() const { return Index(sets.size()); }

    friend bool operator==(const MappingSets &, const MappingSets &) = default;
};

inline void validate(const MappingSets &m, Index n_t)
{
    std::vector<int> seen(static_cast<std::size_t>(n_t), 0);
    for (const auto &set : m.sets)
    {
        if (set.empty())
            throw Error("mapping", "every RF chain needs at least one antenna");
        for (Index i : set)
        {
            if (i < 0 || i >= n_t)
                throw Error("mapping", "antenna index out of range");
            if (seen[static_cast<std::size_t>(i)]++)
                throw Error("mapping", "antenna mapped to more than one RF chain");
        }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw Error("mapping", "antenna left unmapped");
}

inline MappingSets fixed_mapping(Index n_t, Index n_rf)
{
    MappingSets m;
    for (const auto &[start, size] : contiguous_partition(n_t, n_rf))
    {
        std::vector<Index> set(static_cast<std::size_t>(size));
        std::iota(set.begin(), set.end(), start);
        m.sets.push_back(std::move(set));
    }
    return m;
}

inline Mask mapping_mask(const MappingSets &m, Index n_t)
{
    Mask mask = Mask::Constant(n_t, m.chains(), false);
    for (Index j = 0; j < m.chains(); ++j)
        for (Index i : m.sets[j])
            mask(i, j) = true;
    return mask;
}

namespace detail
{

template <typename Real>
CMatrix<Real> gather_rows(const CMatrix<Real> &f, const std::vector<Index> &rows)
{
    CMatrix<Real> out(Index(rows.size()), f.cols());
    for (std::size_t r = 0; r < rows.size(); ++r)
        out.row(Index(r)) = f.row(rows[r]);
    return out;
}

// Largest eigenvalue of sum_{i in rows} y_i y_i^H, i.e. the top squared singular value of the row block.
template <typename Real>
Real block_energy(const CMatrix<Real> &block)
{
    if (block.rows() == 0)
        return Real(0);
    Eigen::JacobiSVD<CMatrix<Real>> svd(block);
    const Real s = svd.singularValues()(0);
    return s * s;
}

} // namespace detail

/// Mapping objective: sum over chains of lambda_1 of the group's row outer products.
template <typename Real>
Real mapping_objective(const CMatrix<Real> &f_opt, const MappingSets &m)
{
    Real total = 0;
    for (const auto &set : m.sets)
        total += detail::block_energy<Real>(detail::gather_rows<Real>(f_opt, set));
    return total;
}

/// Per-RF-chain double-phase-shifter design for a (fixed or dynamic) partial mapping.
/// Group j gets the principal direction x_j of its rows; each antenna keeps the
/// least-squares coefficient x_j^H y_i, rescaled so no entry exceeds modulus 2.
template <typename Real>
BeamformerPair<Real> dps_partial_solve(const CMatrix<Real> &f_opt, const MappingSets &mapping)
{
    const Index n_t = f_opt.rows();
    validate(mapping, n_t);
    const Index n_rf = mapping.chains();
    CMatrix<Real> analog = CMatrix<Real>::Zero(n_t, n_rf);
    CMatrix<Real> digital(n_rf, f_opt.cols());
    for (Index j = 0; j < n_rf; ++j)
    {
        const auto &set = mapping.sets[j];
        const CMatrix<Real> block = detail::gather_rows<Real>(f_opt, set);
        Eigen::JacobiSVD<CMatrix<Real>> svd(block, Eigen::ComputeFullV);
        const CVector<Real> v = svd.matrixV().col(0);
        CVector<Real> coeff = block * v;
        Real row_scale = 1;
        const Real peak = coeff.cwiseAbs().maxCoeff();
        if (peak > Real(2))
            row_scale = Real(2) / peak;
        coeff *= row_scale;
        for (std::size_t r = 0; r < set.size(); ++r)
            analog(set[r], j) = coeff(Index(r));
        digital.row(j) = v.adjoint() / row_scale;
    }
    BeamformerPair<Real> pair;
    pair.analog = make_dps_network<Real>(analog, mapping_mask(mapping, n_t));
    pair.digital = std::move(digital);
    const Real r = approximation_residual<Real>(f_opt, pair);
    pair.trace.objective.push_back(double(r * r));
    pair.trace.iterations = 1;
    pair.trace.converged = true;
    return pair;
}

/// Greedy dynamic mapping: the n_rf strongest rows seed the sets, every other
/// row (strongest first) joins the set whose lambda_1 grows the most. Falls
/// back to the contiguous mapping if that scores higher on the instance.
template <typename Real>
MappingSets dynamic_mapping_greedy(const CMatrix<Real> &f_opt, Index n_rf)
{
    const Index n_t = f_opt.rows();
    if (n_rf < 1 || n_rf > n_t)
        throw Error("dimension", "RF chain count must lie in [1, N_t]");
    const RVector<Real> norms = f_opt.rowwise().squaredNorm();
    std::vector<Index> order(static_cast<std::size_t>(n_t));
    std::iota(order.begin(), order.end(), Index(0));
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return norms(a) > norms(b); });

    MappingSets m;
    m.sets.resize(static_cast<std::size_t>(n_rf));
    std::vector<Real> energy(static_cast<std::size_t>(n_rf));
    for (Index j = 0; j < n_rf; ++j)
    {
        m.sets[j].push_back(order[j]);
        energy[j] = norms(order[j]);
    }
    for (std::size_t r = std::size_t(n_rf); r < order.size(); ++r)
    {
        const Index row = order[r];
        Index best = 0;
        Real best_gain = -1;
        Real best_energy = 0;
        for (Index j = 0; j < n_rf; ++j)
        {
            auto trial = m.sets[j];
            trial.push_back(row);
            const Real e = detail::block_energy<Real>(detail::gather_rows<Real>(f_opt, trial));
            if (e - energy[j] > best_gain)
            {
                best_gain = e - energy[j];
                best = j;
                best_energy = e;
            }
        }
        m.sets[best].push_back(row);
        energy[best] = best_energy;
    }
    for (auto &set : m.sets)
        std::sort(set.begin(), set.end());

    MappingSets fixed = fixed_mapping(n_t, n_rf);
    if (mapping_objective<Real>(f_opt, fixed) > mapping_objective<Real>(f_opt, m))
        return fixed;
    return m;
}

struct KMeansOptions
{
    int max_sweeps = 100;
};

/// Modified K-means for the dynamic mapping: centroids are the principal
/// directions of each set, rows move to the centroid with the largest
/// |x_j^H y_i|^2 (lowest index on ties), emptied sets take the worst-fitting
/// row. Starts from `initial` or, when absent, from the greedy mapping.
/// Lloyd sweeps are followed by best-improvement single-row moves and
/// pairwise swaps on the exact objective. The objective never decreases;
/// `trace` receives it after every accepted step.
template <typename Real>
MappingSets dynamic_mapping_kmeans(const CMatrix<Real> &f_opt, Index n_rf, const KMeansOptions &opts = {},
                                   const MappingSets *initial = nullptr, std::vector<double> *trace = nullptr)
{
    const Index n_t = f_opt.rows();
    MappingSets current = initial ? *initial : dynamic_mapping_greedy<Real>(f_opt, n_rf);
    validate(current, n_t);
    for (auto &set : current.sets)
        std::sort(set.begin(), set.end());
    if (current.chains() != n_rf)
        throw Error("mapping", "initial mapping has the wrong number of RF chains");
    Real objective = mapping_objective<Real>(f_opt, current);
    if (trace)
        trace->push_back(double(objective));

    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep)
    {
        CMatrix<Real> centroids(f_opt.cols(), n_rf); // right singular vectors v_j; fit = |y_i^T v_j|^2
        for (Index j = 0; j < n_rf; ++j)
        {
            Eigen::JacobiSVD<CMatrix<Real>> svd(detail::gather_rows<Real>(f_opt, current.sets[j]),
                                                Eigen::ComputeFullV);
            centroids.col(j) = svd.matrixV().col(0);
        }
        const RMatrix<Real> fit = (f_opt * centroids).cwiseAbs2();

        std::vector<Index> label(static_cast<std::size_t>(n_t));
        for (Index i = 0; i < n_t; ++i)
        {
            Index best = 0;
            for (Index j = 1; j < n_rf; ++j)
                if (fit(i, j) > fit(i, best))
                    best = j;
            label[i] = best;
        }
        std::vector<Index> counts(static_cast<std::size_t>(n_rf), 0);
        for (Index l : label)
            ++counts[l];
        const RVector<Real> norms = f_opt.rowwise().squaredNorm();
        for (Index j = 0; j < n_rf; ++j)
        {
            if (counts[j] > 0)
                continue;
            Index worst = -1;
            Real worst_loss = -1;
            for (Index i = 0; i < n_t; ++i)
            {
                if (counts[label[i]] < 2)
                    continue;
                const Real loss = norms(i) - fit(i, label[i]);
                if (loss > worst_loss)
                {
                    worst_loss = loss;
                    worst = i;
                }
            }
            --counts[label[worst]];
            label[worst] = j;
            ++counts[j];
        }

        MappingSets next;
        next.sets.resize(static_cast<std::size_t>(n_rf));
        for (Index i = 0; i < n_t; ++i)
            next.sets[label[i]].push_back(i);
        if (next == current)
            break;
        const Real next_objective = mapping_objective<Real>(f_opt, next);
        if (next_objective <= objective)
            break;
        current = std::move(next);
        objective = next_objective;
        if (trace)
            trace->push_back(double(objective));
    }

    // Exact-objective refinement: best single-row move or pairwise swap
    // between sets, repeated until neither improves the objective. Each set
    // keeps its column Gram matrix Y^H Y, whose top eigenvalue is lambda_1.
    using Gram = CMatrix<Real>;
    auto top = [](const Gram &g) {
        return Eigen::SelfAdjointEigenSolver<Gram>(g, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
    };
    auto outer = [&](Index row) -> Gram { return f_opt.row(row).adjoint() * f_opt.row(row); };
    std::vector<Gram> gram(static_cast<std::size_t>(n_rf));
    std::vector<Real> energy(static_cast<std::size_t>(n_rf));
    auto refresh = [&](Index j) {
        const CMatrix<Real> y = detail::gather_rows<Real>(f_opt, current.sets[j]);
        gram[j] = y.adjoint() * y;
        energy[j] = top(gram[j]);
    };
    for (Index j = 0; j < n_rf; ++j)
        refresh(j);
    for (int pass = 0; pass < opts.max_sweeps * int(n_t); ++pass)
    {
        Real best_gain = Real(1e-12) * std::max(objective, Real(1));
        Index set_a = -1, set_b = -1, row_a = -1, row_b = -1;
        for (Index a = 0; a < n_rf; ++a)
            for (Index row : current.sets[a])
            {
                const Gram oa = outer(row);
                for (Index b = 0; b < n_rf; ++b)
                {
                    if (a == b)
                        continue;
                    if (current.sets[a].size() >= 2)
                    {
                        const Real gain = top(gram[a] - oa) + top(gram[b] + oa) - energy[a] - energy[b];
                        if (gain > best_gain)
                        {
                            best_gain = gain;
                            set_a = a, set_b = b, row_a = row, row_b = -1;
                        }
                    }
                    if (b < a)
                        continue;
                    for (Index other : current.sets[b])
                    {
                        const Gram d = outer(other) - oa;
                        const Real gain = top(gram[a] + d) + top(gram[b] - d) - energy[a] - energy[b];
                        if (gain > best_gain)
                        {
                            best_gain = gain;
                            set_a = a, set_b = b, row_a = row, row_b = other;
                        }
                    }
                }
            }
        if (set_a < 0)
            break;
        auto &sa = current.sets[set_a];
        auto &sb = current.sets[set_b];
        sa.erase(std::find(sa.begin(), sa.end(), row_a));
        sb.insert(std::upper_bound(sb.begin(), sb.end(), row_a), row_a);
        if (row_b >= 0)
        {
            sb.erase(std::find(sb.begin(), sb.end(), row_b));
            sa.insert(std::upper_bound(sa.begin(), sa.end(), row_b), row_b);
        }
        refresh(set_a);
        refresh(set_b);
        objective = mapping_objective<Real>(f_opt, current);
        if (trace)
            trace->push_back(double(objective));
    }
    return current;
}

} // namespace hbf

#endif
