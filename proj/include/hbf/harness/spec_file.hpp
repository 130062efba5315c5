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

#ifndef HBF_HARNESS_SPEC_FILE_HPP
#define HBF_HARNESS_SPEC_FILE_HPP

#include "hbf/channels.hpp"
#include "hbf/config.hpp"
#include "hbf/solvers.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hbf::harness
{

enum class SweepVariable
{
    none,
    n_rf,
    n_c,
    eta,
    snr,
};

std::string to_string(SweepVariable v);
SweepVariable parse_sweep_variable(const std::string &text);

// Per-algorithm overrides of the global solver settings.
struct AlgorithmEntry
{
    Algorithm id = Algorithm::fully_digital;
    SolverSettings settings;
};

/// One experiment. Text form (one `key = value` per line, `#` comments):
///
///   config.n_t, config.n_r, config.k_users, config.subcarriers, config.n_s,
///   config.n_rf_t, config.n_rf_r, config.eta
///   channel.clusters, channel.rays, channel.angle_spread_deg, channel.delay_taps
///   array.tx, array.rx           "linear" or "planar RxC"
///   array.spacing                in wavelengths
///   algorithms                   comma list of solver names
///   snr_db                       comma list, or "start:stop:step"
///   sweep.variable               none | n_rf | n_c | eta | snr
///   sweep.values                 comma list
///   trials, seed, threads
///   output.path, output.format   format is "csv"
///   options.<key>                max_outer, tolerance, max_inner, armijo, backtrack,
///                                max_backtracks, n_c, omp_oversample, kmeans_sweeps,
///                                exhaustive_width, timing
///   options.<algorithm>.<key>    same keys, for one algorithm only
struct ExperimentSpec
{
    HybridConfig config;
    ChannelParams channel;
    ArrayGeometry tx;
    ArrayGeometry rx;
    int eta = 1;
    std::vector<AlgorithmEntry> algorithms;
    std::vector<double> snr_db;
    SweepVariable sweep = SweepVariable::none;
    std::vector<double> sweep_values;
    int trials = 10;
    std::uint64_t seed = 0;
    int threads = 1;
    bool timing = true;
    std::string output_path = "results.csv";
    std::string output_format = "csv";

    // Every key as read, including defaults, in canonical order.
    std::map<std::string, std::string> entries;
};

ExperimentSpec parse_spec(std::istream &in);
ExperimentSpec parse_spec_text(const std::string &text);
ExperimentSpec load_spec(const std::string &path);

// Rebuilds the typed spec after `entries` has been edited (CLI overrides).
ExperimentSpec rebuild_spec(std::map<std::string, std::string> entries);

// Throws Error("spec", ...) on an inconsistent spec.
void validate(const ExperimentSpec &spec);

// The default SNR grid: -15 to 15 dB in 5 dB steps.
std::vector<double> default_snr_grid();

} // namespace hbf::harness

#endif
