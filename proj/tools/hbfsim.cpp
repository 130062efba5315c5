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

// hbfsim: command-line front end of the experiment harness.
//
//   hbfsim run <spec> [--trials N] [--seed S] [--out PATH] [--threads T] [--no-timing]
//   hbfsim sweep <spec> [same flags]
//   hbfsim compare <result.csv>... [--out PATH]
//
// On failure a single JSON line {"error": tag, "message": ...} goes to stderr
// and the exit status is 2 (1 for command-line usage errors).

#include "hbf/harness/compare.hpp"
#include "hbf/harness/experiment.hpp"
#include "hbf/types.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <optional>

namespace
{

struct RunFlags
{
    std::string spec_path;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> threads;
    bool no_timing = false;
};

void add_run_flags(CLI::App *cmd, RunFlags &f)
{
    cmd->add_option("spec", f.spec_path, "experiment spec file")->required();
    cmd->add_option("--trials", f.trials, "override the trial count");
    cmd->add_option("--seed", f.seed, "override the master seed");
    cmd->add_option("--out", f.out, "override the CSV output path");
    cmd->add_option("--threads", f.threads, "worker threads");
    cmd->add_flag("--no-timing", f.no_timing, "write 0 in the ms column");
}

int execute(const RunFlags &f, bool require_sweep)
{
    using namespace hbf::harness;
    ExperimentSpec spec = load_spec(f.spec_path);
    auto entries = spec.entries;
    if (f.trials)
        entries["trials"] = std::to_string(*f.trials);
    if (f.seed)
        entries["seed"] = std::to_string(*f.seed);
    if (f.out)
        entries["output.path"] = *f.out;
    if (f.threads)
        entries["threads"] = std::to_string(*f.threads);
    if (f.no_timing)
        entries["options.timing"] = "false";
    spec = rebuild_spec(std::move(entries));
    if (require_sweep && spec.sweep == SweepVariable::none)
        throw hbf::Error("spec", "the sweep command needs sweep.variable and sweep.values");

    const auto result = run_experiment(spec);
    write_outputs(spec, result);
    std::cout << "wrote " << result.rows.size() << " rows to " << spec.output_path;
    if (!result.errors.empty())
        std::cout << " (" << result.errors.size() << " solver failures, see " << spec.output_path << ".json)";
    std::cout << '\n';
    return 0;
}

void report(const std::string &tag, const std::string &message)
{
    nlohmann::json line{{"error", tag}, {"message", message}};
    std::cerr << line.dump() << '\n';
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"hybrid beamforming simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(hbf::harness::version()));

    RunFlags run_flags, sweep_flags;
    auto *run = app.add_subcommand("run", "run an experiment spec");
    add_run_flags(run, run_flags);
    auto *sweep = app.add_subcommand("sweep", "run a spec that declares a sweep variable");
    add_run_flags(sweep, sweep_flags);

    std::vector<std::string> files;
    std::optional<std::string> compare_out;
    auto *cmp = app.add_subcommand("compare", "join result files on (sweep, snr)");
    cmp->add_option("files", files, "result CSV files")->required();
    cmp->add_option("--out", compare_out, "write the table here instead of stdout");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try
    {
        if (*run)
            return execute(run_flags, false);
        if (*sweep)
            return execute(sweep_flags, true);
        std::vector<hbf::harness::NamedResult> inputs;
        for (const auto &path : files)
            inputs.push_back({path, hbf::harness::read_csv_file(path)});
        const auto rows = hbf::harness::compare(inputs);
        if (compare_out)
        {
            std::ofstream out(*compare_out, std::ios::binary);
            if (!out)
                throw hbf::Error("io", "cannot write '" + *compare_out + "'");
            hbf::harness::write_comparison(out, rows);
        }
        else
        {
            hbf::harness::write_comparison(std::cout, rows);
        }
        return 0;
    }
    catch (const hbf::Error &e)
    {
        report(e.tag(), e.what());
    }
    catch (const std::exception &e)
    {
        report("internal", e.what());
    }
    return 2;
}
