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

#ifndef HBF_HARDWARE_HPP
#define HBF_HARDWARE_HPP

#include "hbf/config.hpp"

#include <cstdint>

namespace hbf
{

struct HardwareBill
{
    std::int64_t phase_shifters = 0;
    std::int64_t switches = 0;
    std::int64_t rf_chains = 0;

    friend bool operator==(const HardwareBill &, const HardwareBill &) = default;
};

// Component counts of the transmit analog network.
inline HardwareBill hardware_bill(ImplementationKind impl, const Mapping &mapping, std::int64_t n_t,
                                  std::int64_t n_rf, std::int64_t n_c = 0)
{
    std::int64_t eta = 1;
    if (mapping.kind == MappingKind::partially)
        eta = n_rf;
    else if (mapping.kind == MappingKind::group)
        eta = mapping.eta;

    HardwareBill bill;
    bill.rf_chains = n_rf;
    switch (impl)
    {
    case ImplementationKind::sps:
        bill.phase_shifters = n_rf * n_t / eta;
        break;
    case ImplementationKind::dps:
        bill.phase_shifters = 2 * n_rf * n_t / eta;
        break;
    case ImplementationKind::fps:
        bill.phase_shifters = n_c;
        bill.switches = n_c * n_rf * n_t / eta;
        break;
    case ImplementationKind::unconstrained:
        bill.rf_chains = n_t;
        break;
    }
    return bill;
}

inline HardwareBill hardware_bill(const HybridConfig &c)
{
    return hardware_bill(c.implementation.kind, c.mapping, c.n_t, c.n_rf_t, c.implementation.n_c);
}

} // namespace hbf

#endif
