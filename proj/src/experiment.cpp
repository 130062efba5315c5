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

#include "hbf/harness/experiment.hpp"

#include "hbf/hbf.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "json.hpp"

#ifndef HBF_VERSION
#define HBF_VERSION "unknown"
#endif

namespace hbf::harness
{
namespace
{

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

struct SweepPoint
{
    std::optional<double> value;
    HybridConfig config;
    int eta = 1;
    std::optional<int> n_c;
    std::vector<double> snr_db;
};

std::vector<SweepPoint> sweep_points(const ExperimentSpec &spec)
{
    std::vector<SweepPoint> points;
    if (spec.sweep == SweepVariable::none)
    {
        points.push_back({std::nullopt, spec.config, spec.eta, std::nullopt, spec.snr_db});
        return points;
    }
    for (double v : spec.sweep_values)
    {
        SweepPoint p{v, spec.config, spec.eta, std::nullopt, spec.snr_db};
        switch (spec.sweep)
        {
        case SweepVariable::n_rf:
            p.config.n_rf_t = int(v);
            break;
        case SweepVariable::n_c:
            p.n_c = int(v);
            break;
        case SweepVariable::eta:
            p.eta = int(v);
            break;
        case SweepVariable::snr:
            p.snr_db = {v};
            break;
        case SweepVariable::none:
            break;
        }
        p.config.mapping = p.eta > 1 ? Mapping::group(p.eta) : Mapping::fully();
        points.push_back(std::move(p));
    }
    return points;
}

struct TrialOutput
{
    std::vector<ResultRow> rows;
    std::vector<RowError> errors;
};

TrialOutput run_trial(const ExperimentSpec &spec, const std::vector<SweepPoint> &points, int trial)
{
    TrialOutput out;
    const std::uint64_t seed = trial_seed(spec.seed, trial);

    std::optional<ChannelSet<double>> channels;
    CMatrix<double> f_opt;
    RowError setup_error;
    try
    {
        ChannelParams params = spec.channel;
        params.seed = seed;
        channels = generate_channels<double>(params, spec.tx, spec.rx, spec.config.k_users);
        f_opt = fully_digital_beamformer<double>(*channels, spec.config);
    }
    catch (const Error &e)
    {
        channels.reset();
        setup_error = {"*", std::nullopt, trial, e.tag(), e.what()};
        out.errors.push_back(setup_error);
    }

    for (const auto &entry : spec.algorithms)
        for (const auto &point : points)
        {
            const std::int64_t n_c = point.n_c.value_or(entry.settings.n_c);
            const HardwareBill bill =
                algorithm_hardware(entry.id, point.eta, point.config.n_t, point.config.n_rf_t, int(n_c));
            ResultRow base;
            base.algorithm = to_string(entry.id);
            base.structure = structure_name(entry.id, point.eta);
            base.sweep = point.value;
            base.trial = trial;
            base.phase_shifters = bill.phase_shifters;
            base.switches = bill.switches;

            auto emit_failure = [&](const std::string &tag, const std::string &message) {
                if (channels)
                    out.errors.push_back({base.algorithm, point.value, trial, tag, message});
                for (double snr : point.snr_db)
                {
                    ResultRow r = base;
                    r.snr_db = snr;
                    r.se_bps_hz = r.residual = r.iters = nan_v;
                    out.rows.push_back(std::move(r));
                }
            };
            if (!channels)
            {
                emit_failure(setup_error.tag, setup_error.message);
                continue;
            }
            try
            {
                SolverSettings settings = entry.settings;
                settings.altmin.seed = detail::mix_seed(seed, 100 + std::uint64_t(entry.id));
                if (point.n_c)
                    settings.n_c = *point.n_c;
                const auto t0 = std::chrono::steady_clock::now();
                const auto link = design_link<double>(entry.id, *channels, point.config, f_opt, point.eta, settings);
                const auto t1 = std::chrono::steady_clock::now();
                base.residual = approximation_residual<double>(f_opt, link.tx);
                base.iters = link.tx.trace.iterations;
                base.ms = spec.timing ? std::chrono::duration<double, std::milli>(t1 - t0).count() : 0.0;
                for (double snr : point.snr_db)
                {
                    ResultRow r = base;
                    r.snr_db = snr;
                    r.se_bps_hz =
                        spectral_efficiency<double>(*channels, link.tx, link.rx, point.config.n_s, snr).bits_per_hz;
                    out.rows.push_back(std::move(r));
                }
            }
            catch (const Error &e)
            {
                emit_failure(e.tag(), e.what());
            }
            catch (const std::exception &e)
            {
                emit_failure("internal", e.what());
            }
        }
    return out;
}

struct Moments
{
    double mean = nan_v;
    double std_error = nan_v;
};

Moments moments(const std::vector<double> &values)
{
    double sum = 0;
    int n = 0;
    for (double v : values)
        if (std::isfinite(v))
        {
            sum += v;
            ++n;
        }
    Moments m;
    if (n == 0)
        return m;
    m.mean = sum / n;
    double ss = 0;
    for (double v : values)
        if (std::isfinite(v))
            ss += (v - m.mean) * (v - m.mean);
    m.std_error = n > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
    return m;
}

} // namespace

std::uint64_t trial_seed(std::uint64_t master, int trial)
{
    return detail::mix_seed(master, std::uint64_t(trial));
}

ExperimentResult run_experiment(const ExperimentSpec &spec)
{
    validate(spec);
    const auto points = sweep_points(spec);
    std::vector<TrialOutput> trials(static_cast<std::size_t>(spec.trials));

    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    auto worker = [&] {
        for (int t = next++; t < spec.trials; t = next++)
        {
            try
            {
                trials[t] = run_trial(spec, points, t);
            }
            catch (...)
            {
                std::lock_guard lock(failure_lock);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    const int workers = std::min(spec.threads, spec.trials);
    if (workers <= 1)
    {
        worker();
    }
    else
    {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(worker);
        for (auto &th : pool)
            th.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    ExperimentResult result;
    for (auto &t : trials)
    {
        result.rows.insert(result.rows.end(), t.rows.begin(), t.rows.end());
        result.errors.insert(result.errors.end(), t.errors.begin(), t.errors.end());
    }

    // Every trial emits the same (algorithm, sweep, snr) sequence, so row k of
    // trial t sits at t * block + k.
    const std::size_t block = trials.empty() ? 0 : trials.front().rows.size();
    std::vector<ResultRow> aggregates;
    for (std::size_t k = 0; k < block; ++k)
    {
        std::vector<double> se, res, it, ms;
        for (const auto &t : trials)
        {
            const auto &r = t.rows[k];
            se.push_back(r.se_bps_hz);
            res.push_back(r.residual);
            it.push_back(r.iters);
            ms.push_back(r.ms);
        }
        const Moments m_se = moments(se), m_res = moments(res), m_it = moments(it), m_ms = moments(ms);
        ResultRow mean = trials.front().rows[k];
        mean.kind = RowKind::mean;
        mean.trial = 0;
        mean.se_bps_hz = m_se.mean;
        mean.residual = m_res.mean;
        mean.iters = m_it.mean;
        mean.ms = m_ms.mean;
        ResultRow err = mean;
        err.kind = RowKind::std_error;
        err.se_bps_hz = m_se.std_error;
        err.residual = m_res.std_error;
        err.iters = m_it.std_error;
        err.ms = m_ms.std_error;
        aggregates.push_back(std::move(mean));
        aggregates.push_back(std::move(err));
    }
    result.rows.insert(result.rows.end(), aggregates.begin(), aggregates.end());
    return result;
}

const char *version() { return HBF_VERSION; }

std::string sidecar_json(const ExperimentSpec &spec, const ExperimentResult &result)
{
    nlohmann::ordered_json doc;
    doc["version"] = version();
    doc["csv_header"] = csv_header;
    doc["rows"] = result.rows.size();
    doc["spec"] = nlohmann::ordered_json(spec.entries);
    doc["errors"] = nlohmann::ordered_json::array();
    for (const auto &e : result.errors)
    {
        nlohmann::ordered_json j;
        j["algorithm"] = e.algorithm;
        j["sweep"] = e.sweep ? nlohmann::ordered_json(*e.sweep) : nlohmann::ordered_json(nullptr);
        j["trial"] = e.trial;
        j["tag"] = e.tag;
        j["message"] = e.message;
        doc["errors"].push_back(std::move(j));
    }
    return doc.dump(2) + "\n";
}

void write_outputs(const ExperimentSpec &spec, const ExperimentResult &result)
{
    write_csv_file(spec.output_path, result);
    const std::string side = spec.output_path + ".json";
    std::ofstream out(side, std::ios::binary);
    if (!out)
        throw Error("io", "cannot write '" + side + "'");
    out << sidecar_json(spec, result);
}

} // namespace hbf::harness
