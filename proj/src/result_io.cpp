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

#include "hbf/harness/result_io.hpp"

#include "hbf/types.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace hbf::harness
{
namespace
{

std::vector<std::string> split_fields(const std::string &line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true)
    {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return out;
}

std::int64_t parse_int(const std::string &text)
{
    std::int64_t v = 0;
    const auto *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw Error("schema", "'" + text + "' is not an integer");
    return v;
}

} // namespace

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string &text)
{
    if (text == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    if (text == "inf")
        return std::numeric_limits<double>::infinity();
    if (text == "-inf")
        return -std::numeric_limits<double>::infinity();
    double v = 0;
    const auto *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw Error("schema", "'" + text + "' is not a number");
    return v;
}

void write_csv(std::ostream &out, const ExperimentResult &result)
{
    out << csv_header << '\n';
    for (const auto &r : result.rows)
    {
        out << r.algorithm << ',' << r.structure << ',' << (r.sweep ? format_double(*r.sweep) : "") << ','
            << format_double(r.snr_db) << ',';
        switch (r.kind)
        {
        case RowKind::trial:
            out << r.trial;
            break;
        case RowKind::mean:
            out << "mean";
            break;
        case RowKind::std_error:
            out << "stderr";
            break;
        }
        out << ',' << format_double(r.se_bps_hz) << ',' << format_double(r.residual) << ','
            << format_double(r.iters) << ',' << format_double(r.ms) << ',' << r.phase_shifters << ','
            << r.switches << '\n';
    }
}

ExperimentResult read_csv(std::istream &in)
{
    std::string line;
    if (!std::getline(in, line) || line != csv_header)
        throw Error("schema", "unexpected CSV header");
    ExperimentResult result;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        const auto f = split_fields(line);
        if (f.size() != 11)
            throw Error("schema", "expected 11 columns, found " + std::to_string(f.size()));
        ResultRow r;
        r.algorithm = f[0];
        r.structure = f[1];
        if (!f[2].empty())
            r.sweep = parse_double(f[2]);
        r.snr_db = parse_double(f[3]);
        if (f[4] == "mean")
            r.kind = RowKind::mean;
        else if (f[4] == "stderr")
            r.kind = RowKind::std_error;
        else
            r.trial = int(parse_int(f[4]));
        r.se_bps_hz = parse_double(f[5]);
        r.residual = parse_double(f[6]);
        r.iters = parse_double(f[7]);
        r.ms = parse_double(f[8]);
        r.phase_shifters = parse_int(f[9]);
        r.switches = parse_int(f[10]);
        result.rows.push_back(std::move(r));
    }
    return result;
}

void write_csv_file(const std::string &path, const ExperimentResult &result)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("io", "cannot write '" + path + "'");
    write_csv(out, result);
    if (!out)
        throw Error("io", "write to '" + path + "' failed");
}

ExperimentResult read_csv_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("io", "cannot open '" + path + "'");
    ExperimentResult result = read_csv(in);

    std::ifstream side(path + ".json");
    if (side)
    {
        const auto doc = nlohmann::json::parse(side, nullptr, false);
        if (doc.is_discarded())
            throw Error("schema", "sidecar '" + path + ".json' is not valid JSON");
        if (doc.contains("errors"))
            for (const auto &e : doc["errors"])
            {
                RowError err;
                err.algorithm = e.at("algorithm").get<std::string>();
                if (!e.at("sweep").is_null())
                    err.sweep = e.at("sweep").get<double>();
                err.trial = e.at("trial").get<int>();
                err.tag = e.at("tag").get<std::string>();
                err.message = e.at("message").get<std::string>();
                result.errors.push_back(std::move(err));
            }
    }
    return result;
}

} // namespace hbf::harness
