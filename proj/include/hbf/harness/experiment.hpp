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

#ifndef HBF_HARNESS_EXPERIMENT_HPP
#define HBF_HARNESS_EXPERIMENT_HPP

#include "hbf/harness/result_io.hpp"
#include "hbf/harness/spec_file.hpp"

#include <cstdint>
#include <string>

namespace hbf::harness
{

// Seed of trial `t`; depends only on the master seed and the index.
std::uint64_t trial_seed(std::uint64_t master, int trial);

/// Runs every trial (in parallel over spec.threads workers), every sweep
/// value, algorithm and SNR. Rows are ordered by (trial, algorithm, sweep
/// value, snr) in spec order, then the mean and standard-error rows follow.
/// A solver failure yields NaN metrics on its rows and an entry in `errors`.
ExperimentResult run_experiment(const ExperimentSpec &spec);

// JSON sidecar: version, effective spec entries, row count and error list.
std::string sidecar_json(const ExperimentSpec &spec, const ExperimentResult &result);

// Writes the CSV to spec.output_path and the sidecar next to it (path + ".json").
void write_outputs(const ExperimentSpec &spec, const ExperimentResult &result);

const char *version();

} // namespace hbf::harness

#endif
