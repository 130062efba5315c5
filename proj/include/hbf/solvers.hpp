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

#ifndef HBF_SOLVERS_HPP
#define HBF_SOLVERS_HPP

#include "hbf/analog.hpp"
#include "hbf/beamformer.hpp"
#include "hbf/channels.hpp"
#include "hbf/config.hpp"
#include "hbf/digital.hpp"
#include "hbf/dps.hpp"
#include "hbf/fps.hpp"
#include "hbf/hardware.hpp"
#include "hbf/rate.hpp"
#include "hbf/sps.hpp"
#include "hbf/types.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hbf
{

enum class Algorithm
{
    fully_digital,
    omp,
    mo_altmin,
    pe_relaxation,
    sps_partial,
    dps_full,
    dps_partial,
    dps_greedy,
    dps_kmeans,
    fps,
};

struct AlgorithmInfo
{
    Algorithm id;
    std::string_view name;
    ImplementationKind implementation;
    bool fully_connected; // may be nested inside a group-connected mapping
};

inline constexpr std::array<AlgorithmInfo, 10> algorithm_table{{
    {Algorithm::fully_digital, "fully-digital", ImplementationKind::unconstrained, false},
    {Algorithm::omp, "omp", ImplementationKind::sps, true},
    {Algorithm::mo_altmin, "mo-altmin", ImplementationKind::sps, true},
    {Algorithm::pe_relaxation, "pe", ImplementationKind::sps, true},
    {Algorithm::sps_partial, "sps-partial", ImplementationKind::sps, false},
    {Algorithm::dps_full, "dps-full", ImplementationKind::dps, true},
    {Algorithm::dps_partial, "dps-partial", ImplementationKind::dps, false},
    {Algorithm::dps_greedy, "dps-greedy", ImplementationKind::dps, false},
    {Algorithm::dps_kmeans, "dps-kmeans", ImplementationKind::dps, false},
    {Algorithm::fps, "fps", ImplementationKind::fps, true},
}};

inline const AlgorithmInfo &info(Algorithm a)
{
    for (const auto &entry : algorithm_table)
        if (entry.id == a)
            return entry;
    throw Error("algorithm", "unregistered algorithm");
}

inline std::string to_string(Algorithm a) { return std::string(info(a).name); }

inline Algorithm parse_algorithm(std::string_view name)
{
    for (const auto &entry : algorithm_table)
        if (entry.name == name)
            return entry.id;
    throw Error("algorithm", "unknown algorithm '" + std::string(name) + "'");
}

struct SolverSettings
{
    AltMinOptions altmin;
    FpsOptions fps;
    KMeansOptions kmeans;
    int n_c = 10;
    int omp_oversample = 0; // DFT grid appended to the path codebook
};

// Mapping an algorithm actually realizes for a given group count.
inline Mapping realized_mapping(Algorithm a, int eta)
{
    if (a == Algorithm::fully_digital)
        return Mapping::fully();
    if (!info(a).fully_connected)
        return Mapping::partially();
    return eta <= 1 ? Mapping::fully() : Mapping::group(eta);
}

inline std::string structure_name(Algorithm a, int eta)
{
    switch (a)
    {
    case Algorithm::fully_digital:
        return "digital";
    case Algorithm::dps_greedy:
    case Algorithm::dps_kmeans:
        return "DPS-dynamic";
    default:
        return to_string(info(a).implementation) + "-" + to_string(realized_mapping(a, eta));
    }
}

inline HardwareBill algorithm_hardware(Algorithm a, int eta, Index n_t, Index n_rf, int n_c)
{
    return hardware_bill(info(a).implementation, realized_mapping(a, eta), n_t, n_rf,
                         info(a).implementation == ImplementationKind::fps ? n_c : 0);
}

namespace detail
{

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt)
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Unnormalized design of one (sub)network.
template <typename Real>
BeamformerPair<Real> design_raw(Algorithm a, const CMatrix<Real> &target, Index n_rf, const SolverSettings &settings,
                                const OmpCodebook<Real> *codebook)
{
    const Index n_t = target.rows();
    switch (a)
    {
    case Algorithm::fully_digital: {
        BeamformerPair<Real> pair;
        pair.analog = make_unconstrained_network<Real>(CMatrix<Real>::Identity(n_t, n_t));
        pair.digital = target;
        pair.trace.objective.push_back(0.0);
        pair.trace.converged = true;
        return pair;
    }
    case Algorithm::omp: {
        if (codebook)
            return omp_raw<Real>(target, *codebook, n_rf, full_mask(n_t, n_rf));
        const auto grid = make_codebook<Real>(CMatrix<Real>(n_t, 0), std::max(1, settings.omp_oversample));
        return omp_raw<Real>(target, grid, n_rf, full_mask(n_t, n_rf));
    }
    case Algorithm::mo_altmin:
        return mo_altmin_raw<Real>(target, n_rf, settings.altmin, nullptr);
    case Algorithm::pe_relaxation:
        return pe_relaxation_raw<Real>(target, n_rf);
    case Algorithm::sps_partial:
        return sps_partial_raw<Real>(target, n_rf, settings.altmin);
    case Algorithm::dps_full:
        return dps_full_solve<Real>(target, n_rf);
    case Algorithm::dps_partial:
        return dps_partial_solve<Real>(target, fixed_mapping(n_t, n_rf));
    case Algorithm::dps_greedy:
        return dps_partial_solve<Real>(target, dynamic_mapping_greedy<Real>(target, n_rf));
    case Algorithm::dps_kmeans:
        return dps_partial_solve<Real>(target, dynamic_mapping_kmeans<Real>(target, n_rf, settings.kmeans));
    case Algorithm::fps: {
        FpsProblem<Real> problem{target, fps_bank_default<Real>(settings.n_c), n_rf, full_mask(n_t, n_rf)};
        FpsOptions fo = settings.fps;
        fo.altmin = settings.altmin;
        return fps_altmin_raw<Real>(problem, fo);
    }
    }
    throw Error("algorithm", "unregistered algorithm");
}

template <typename Real>
BeamformerPair<Real> group_connected_raw(const CMatrix<Real> &f_opt, Index n_rf, int eta, Algorithm inner,
                                         const SolverSettings &settings, const OmpCodebook<Real> *codebook)
{
    const Index n_t = f_opt.rows();
    if (!info(inner).fully_connected)
        throw Error("algorithm", to_string(inner) + " is not a fully-connected solver");
    if (eta < 1 || n_t % eta != 0 || n_rf % eta != 0)
        throw Error("dimension", "group count must divide both N_t and N_RF");
    if (eta == 1)
        return design_raw<Real>(inner, f_opt, n_rf, settings, codebook);

    const Index rows = n_t / eta;
    const Index chains = n_rf / eta;
    const Mask mask = group_mask(n_t, n_rf, eta);
    CMatrix<Real> analog = CMatrix<Real>::Zero(n_t, n_rf);
    CMatrix<Real> digital(n_rf, f_opt.cols());
    Mask switches;
    std::optional<PhaseBank<Real>> bank;
    BeamformerPair<Real> out;
    double objective = 0.0;
    for (int g = 0; g < eta; ++g)
    {
        SolverSettings sub = settings;
        sub.altmin.seed = mix_seed(settings.altmin.seed, std::uint64_t(g));
        std::optional<OmpCodebook<Real>> sub_book;
        if (codebook)
        {
            sub_book.emplace();
            sub_book->candidates = codebook->candidates.middleRows(g * rows, rows);
            sub_book->candidates.colwise().normalize();
        }
        const CMatrix<Real> block_target = f_opt.middleRows(g * rows, rows);
        BeamformerPair<Real> part =
            design_raw<Real>(inner, block_target, chains, sub, sub_book ? &*sub_book : nullptr);
        analog.block(g * rows, g * chains, rows, chains) = part.analog.matrix;
        digital.middleRows(g * chains, chains) = part.digital;
        if (const auto *fps = std::get_if<FpsPayload<Real>>(&part.analog.payload))
        {
            const Index n_c = fps->bank.size();
            if (switches.size() == 0)
                switches = Mask::Constant(n_t, n_c * n_rf, false);
            switches.block(g * rows, g * chains * n_c, rows, chains * n_c) = fps->switches.bits;
            bank = fps->bank;
        }
        if (!part.trace.objective.empty())
            objective += part.trace.objective.back();
        out.trace.iterations += part.trace.iterations;
        out.trace.line_search_failures += part.trace.line_search_failures;
        out.trace.repeated_selection = out.trace.repeated_selection || part.trace.repeated_selection;
    }
    switch (info(inner).implementation)
    {
    case ImplementationKind::sps:
        out.analog = sps_from_matrix<Real>(analog, mask);
        break;
    case ImplementationKind::dps:
        out.analog = make_dps_network<Real>(analog, mask);
        break;
    case ImplementationKind::fps:
        out.analog = make_fps_network<Real>(SwitchMatrix{switches}, *bank, mask);
        break;
    case ImplementationKind::unconstrained:
        out.analog = make_unconstrained_network<Real>(analog);
        break;
    }
    out.digital = std::move(digital);
    out.trace.objective.push_back(objective);
    out.trace.converged = true;
    return out;
}

} // namespace detail

/// Group-connected design: antennas and RF chains split into `eta` equal
/// contiguous groups, the fully-connected `inner` solver runs on every block,
/// and the block-diagonal result is power-normalized once, globally.
/// eta = 1 reproduces the inner solver run on the whole target.
template <typename Real>
BeamformerPair<Real> group_connected_solve(const CMatrix<Real> &f_opt, Index n_rf, int eta, Algorithm inner,
                                           const SolverSettings &settings = {},
                                           const OmpCodebook<Real> *codebook = nullptr)
{
    return power_normalize(detail::group_connected_raw<Real>(f_opt, n_rf, eta, inner, settings, codebook),
                           Real(f_opt.squaredNorm()));
}

/// Runs any registered algorithm and normalizes the result to ||target||_F^2.
/// Fully-connected algorithms honour `eta`; partial and dynamic ones ignore it.
template <typename Real>
BeamformerPair<Real> solve(Algorithm a, const CMatrix<Real> &target, Index n_rf, int eta = 1,
                           const SolverSettings &settings = {}, const OmpCodebook<Real> *codebook = nullptr)
{
    if (a == Algorithm::fully_digital)
        return detail::design_raw<Real>(a, target, n_rf, settings, codebook);
    if (info(a).fully_connected)
        return group_connected_solve<Real>(target, n_rf, eta, a, settings, codebook);
    return power_normalize(detail::design_raw<Real>(a, target, n_rf, settings, codebook),
                           Real(target.squaredNorm()));
}

// ---- end-to-end link ------------------------------------------------------------

template <typename Real = double>
struct LinkDesign
{
    BeamformerPair<Real> tx;
    std::vector<BeamformerPair<Real>> rx; // one per user
};

/// Designs the transmit beamformer for `f_opt` and, with the same algorithm
/// family, each user's combiner toward its fully digital combiner.
template <typename Real>
LinkDesign<Real> design_link(Algorithm a, const ChannelSet<Real> &ch, const HybridConfig &cfg,
                             const CMatrix<Real> &f_opt, int eta, const SolverSettings &settings)
{
    LinkDesign<Real> link;
    const auto tx_book = make_codebook<Real>(tx_path_responses<Real>(ch), settings.omp_oversample);
    link.tx = solve<Real>(a, f_opt, cfg.n_rf_t, eta, settings, &tx_book);

    const auto w_opt = fully_digital_combiners<Real>(ch, link.tx.product(), cfg.n_s);
    const bool rx_groups = eta > 1 && cfg.n_r % eta == 0 && cfg.n_rf_r % eta == 0;
    if (eta > 1 && info(a).fully_connected && !rx_groups)
        throw Error("dimension", "group count must divide N_r and the receive RF chain count");
    for (int k = 0; k < ch.users; ++k)
    {
        SolverSettings rx_settings = settings;
        rx_settings.altmin.seed = detail::mix_seed(settings.altmin.seed, 1000 + std::uint64_t(k));
        const auto rx_book = make_codebook<Real>(rx_path_responses<Real>(ch, k), settings.omp_oversample);
        if (a == Algorithm::fully_digital)
        {
            BeamformerPair<Real> w;
            w.analog = make_unconstrained_network<Real>(CMatrix<Real>::Identity(cfg.n_r, cfg.n_r));
            w.digital = w_opt[k];
            link.rx.push_back(std::move(w));
        }
        else
        {
            link.rx.push_back(solve<Real>(a, w_opt[k], cfg.n_rf_r, eta, rx_settings, &rx_book));
        }
    }
    return link;
}

/// Mean spectral efficiency of the FPS design for every bank size in `n_c_list`
/// (ascending), each trial's channel shared across bank sizes.
template <typename Real>
std::vector<double> fps_saturation_sweep(const std::vector<ChannelSet<Real>> &trials, const HybridConfig &cfg,
                                         const std::vector<int> &n_c_list, double snr_db,
                                         const SolverSettings &settings = {})
{
    if (n_c_list.empty() || !std::is_sorted(n_c_list.begin(), n_c_list.end()))
        throw Error("sweep", "bank sizes must be a non-empty ascending list");
    std::vector<double> mean(n_c_list.size(), 0.0);
    for (const auto &ch : trials)
    {
        const CMatrix<Real> f_opt = fully_digital_beamformer<Real>(ch, cfg);
        for (std::size_t n = 0; n < n_c_list.size(); ++n)
        {
            SolverSettings s = settings;
            s.n_c = n_c_list[n];
            const auto link = design_link<Real>(Algorithm::fps, ch, cfg, f_opt, cfg.groups(), s);
            mean[n] += spectral_efficiency<Real>(ch, link.tx, link.rx, cfg.n_s, snr_db).bits_per_hz;
        }
    }
    for (auto &m : mean)
        m /= double(trials.size());
    return mean;
}

} // namespace hbf

#endif
