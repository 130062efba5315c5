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

#include "hbf/harness/compare.hpp"

#include "hbf/types.hpp"

#include <map>
#include <ostream>
#include <set>

namespace hbf::harness
{
namespace
{

using Key = std::pair<std::optional<double>, double>; // (sweep, snr)

struct Series
{
    std::string source;
    std::string algorithm;
    std::map<Key, const ResultRow *> points;
};

} // namespace

std::vector<ComparisonRow> compare(const std::vector<NamedResult> &inputs)
{
    if (inputs.empty())
        throw Error("join", "nothing to compare");
    std::vector<Series> series;
    std::set<Key> grid;
    for (std::size_t n = 0; n < inputs.size(); ++n)
    {
        std::set<Key> keys;
        std::map<std::string, std::size_t> index;
        for (const auto &row : inputs[n].result.rows)
        {
            if (row.kind != RowKind::mean)
                continue;
            auto [it, fresh] = index.emplace(row.algorithm, series.size());
            if (fresh)
                series.push_back({inputs[n].source, row.algorithm, {}});
            const Key key{row.sweep, row.snr_db};
            series[it->second].points[key] = &row;
            keys.insert(key);
        }
        if (keys.empty())
            throw Error("schema", "'" + inputs[n].source + "' holds no aggregate rows");
        if (n == 0)
            grid = keys;
        else if (keys != grid)
            throw Error("join", "'" + inputs[n].source + "' does not share the (sweep, snr) grid of '" +
                                    inputs[0].source + "'");
    }
    for (const auto &s : series)
        if (s.points.size() != grid.size())
            throw Error("join", s.algorithm + " in '" + s.source + "' misses part of the (sweep, snr) grid");

    std::vector<ComparisonRow> out;
    for (const Key &key : grid)
    {
        const double reference = series.front().points.at(key)->se_bps_hz;
        for (const auto &s : series)
        {
            const ResultRow &r = *s.points.at(key);
            out.push_back({s.source, s.algorithm, r.structure, key.first, key.second, r.se_bps_hz,
                           r.se_bps_hz - reference, r.phase_shifters, r.switches});
        }
    }
    return out;
}

void write_comparison(std::ostream &out, const std::vector<ComparisonRow> &rows)
{
    out << "source,algorithm,structure,sweep,snr_db,mean_se,delta_se,phase_shifters,switches\n";
    for (const auto &r : rows)
        out << r.source << ',' << r.algorithm << ',' << r.structure << ','
            << (r.sweep ? format_double(*r.sweep) : "") << ',' << format_double(r.snr_db) << ','
            << format_double(r.mean_se) << ',' << format_double(r.delta_se) << ',' << r.phase_shifters << ','
            << r.switches << '\n';
}

} // namespace hbf::harness
