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

#ifndef HBF_CONFIG_HPP
#define HBF_CONFIG_HPP

#include "hbf/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace hbf
{

enum class MappingKind
{
    fully,
    partially,
    group,
};

enum class ImplementationKind
{
    sps,
    dps,
    fps,
    unconstrained, // fully digital reference, not a hybrid structure
};

struct Mapping
{
    MappingKind kind = MappingKind::fully;
    int eta = 1; // number of groups; only read for MappingKind::group

    static Mapping fully() { return {MappingKind::fully, 1}; }
    static Mapping partially() { return {MappingKind::partially, 0}; }
    static Mapping group(int eta) { return {MappingKind::group, eta}; }
};

struct Implementation
{
    ImplementationKind kind = ImplementationKind::sps;
    int n_c = 0; // size of the fixed phase bank; only read for FPS

    static Implementation sps() { return {ImplementationKind::sps, 0}; }
    static Implementation dps() { return {ImplementationKind::dps, 0}; }
    static Implementation fps(int n_c) { return {ImplementationKind::fps, n_c}; }
};

struct HybridConfig
{
    int n_t = 0;
    int n_r = 0;
    int k_users = 1;
    int subcarriers = 1;
    int n_s = 1;
    int n_rf_t = 0;
    int n_rf_r = 0;
    Mapping mapping = Mapping::fully();
    Implementation implementation = Implementation::sps();

    // Columns of the concatenated fully digital target, K * N_s * F.
    int target_columns() const { return k_users * n_s * subcarriers; }

    // Number of RF-chain / antenna groups implied by the mapping.
    int groups() const
    {
        switch (mapping.kind)
        {
        case MappingKind::fully:
            return 1;
        case MappingKind::partially:
            return n_rf_t;
        case MappingKind::group:
            return mapping.eta;
        }
        return 1;
    }
};

inline void validate(const HybridConfig &c)
{
    auto fail = [](const std::string &what) { throw Error("config", "invalid configuration: " + what); };
    if (c.n_t < 1 || c.n_r < 1 || c.k_users < 1 || c.subcarriers < 1 || c.n_s < 1)
        fail("antenna, user, subcarrier and stream counts must be positive");
    if (c.n_rf_t < 1 || c.n_rf_r < 1)
        fail("RF chain counts must be positive");
    if (c.k_users * c.n_s > c.n_rf_t)
        fail("K*N_s must not exceed the transmit RF chain count");
    if (c.n_rf_t >= c.n_t)
        fail("transmit RF chain count must be below the antenna count");
    if (c.n_s > c.n_rf_r || c.n_rf_r > c.n_r)
        fail("receive RF chain count must lie in [N_s, N_r]");
    if (c.mapping.kind == MappingKind::group)
    {
        const int eta = c.mapping.eta;
        if (eta < 1 || c.n_rf_t % eta != 0 || c.n_t % eta != 0)
            fail("group count must divide both N_RF and N_t");
    }
    if (c.implementation.kind == ImplementationKind::fps && c.implementation.n_c < 1)
        fail("FPS phase bank needs at least one phase shifter");
}

// Contiguous split of n items into `parts` blocks whose sizes differ by at most one,
// larger blocks first. Returns (start, size) pairs.
inline std::vector<std::pair<Index, Index>> contiguous_partition(Index n, Index parts)
{
    if (parts < 1 || parts > n)
        throw Error("dimension", "cannot split " + std::to_string(n) + " items into " + std::to_string(parts) + " groups");
    std::vector<std::pair<Index, Index>> blocks;
    blocks.reserve(static_cast<std::size_t>(parts));
    const Index base = n / parts;
    const Index extra = n % parts;
    Index start = 0;
    for (Index p = 0; p < parts; ++p)
    {
        const Index size = base + (p < extra ? 1 : 0);
        blocks.emplace_back(start, size);
        start += size;
    }
    return blocks;
}

inline std::string to_string(ImplementationKind k)
{
    switch (k)
    {
    case ImplementationKind::sps:
        return "SPS";
    case ImplementationKind::dps:
        return "DPS";
    case ImplementationKind::fps:
        return "FPS";
    case ImplementationKind::unconstrained:
        return "digital";
    }
    return "?";
}

inline std::string to_string(const Mapping &m)
{
    switch (m.kind)
    {
    case MappingKind::fully:
        return "fully";
    case MappingKind::partially:
        return "partially";
    case MappingKind::group:
        return "group(" + std::to_string(m.eta) + ")";
    }
    return "?";
}

} // namespace hbf

#endif
