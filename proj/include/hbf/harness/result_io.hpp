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

#ifndef HBF_HARNESS_RESULT_IO_HPP
#define HBF_HARNESS_RESULT_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hbf::harness
{

enum class RowKind
{
    trial,
    mean,
    std_error,
};

// One CSV line. Aggregate rows carry "mean" or "stderr" in the trial column.
struct ResultRow
{
    std::string algorithm;
    std::string structure;
    std::optional<double> sweep; // empty when the experiment has no sweep variable
    double snr_db = 0;
    RowKind kind = RowKind::trial;
    int trial = 0;
    double se_bps_hz = 0;
    double residual = 0;
    double iters = 0;
    double ms = 0;
    std::int64_t phase_shifters = 0;
    std::int64_t switches = 0;

    friend bool operator==(const ResultRow &, const ResultRow &) = default;
};

struct RowError
{
    std::string algorithm;
    std::optional<double> sweep;
    int trial = 0;
    std::string tag;
    std::string message;

    friend bool operator==(const RowError &, const RowError &) = default;
};

struct ExperimentResult
{
    std::vector<ResultRow> rows;
    std::vector<RowError> errors;

    friend bool operator==(const ExperimentResult &, const ExperimentResult &) = default;
};

inline constexpr const char *csv_header =
    "algorithm,structure,sweep,snr_db,trial,se_bps_hz,residual,iters,ms,phase_shifters,switches";

// Shortest decimal text that reads back to the same double; "nan" for NaN.
std::string format_double(double v);
double parse_double(const std::string &text);

void write_csv(std::ostream &out, const ExperimentResult &result);
ExperimentResult read_csv(std::istream &in);

void write_csv_file(const std::string &path, const ExperimentResult &result);
ExperimentResult read_csv_file(const std::string &path);

} // namespace hbf::harness

#endif
