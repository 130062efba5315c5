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

#ifndef HBF_HARNESS_COMPARE_HPP
#define HBF_HARNESS_COMPARE_HPP

#include "hbf/harness/result_io.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hbf::harness
{

struct ComparisonRow
{
    std::string source;
    std::string algorithm;
    std::string structure;
    std::optional<double> sweep;
    double snr_db = 0;
    double mean_se = 0;
    double delta_se = 0; // against the first (source, algorithm) pair
    std::int64_t phase_shifters = 0;
    std::int64_t switches = 0;
};

struct NamedResult
{
    std::string source;
    ExperimentResult result;
};

/// Joins the mean rows of every input on (sweep, snr). The first algorithm of
/// the first input is the reference for delta_se. Throws Error("join") when
/// the inputs do not cover the same (sweep, snr) grid.
std::vector<ComparisonRow> compare(const std::vector<NamedResult> &inputs);

void write_comparison(std::ostream &out, const std::vector<ComparisonRow> &rows);

} // namespace hbf::harness

#endif
