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

#include "hbf/harness/spec_file.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace hbf::harness
{
namespace
{

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string &s)
{
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
    {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

[[noreturn]] void bad_value(const std::string &key, const std::string &value, const char *what)
{
    throw Error("spec", "key '" + key + "': '" + value + "' is not " + what);
}

long long to_integer(const std::string &key, const std::string &value)
{
    long long v = 0;
    const auto *end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, v);
    if (ec != std::errc() || ptr != end)
        bad_value(key, value, "an integer");
    return v;
}

double to_real(const std::string &key, const std::string &value)
{
    double v = 0;
    const auto *end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        bad_value(key, value, "a finite number");
    return v;
}

bool to_bool(const std::string &key, const std::string &value)
{
    if (value == "true" || value == "1" || value == "yes")
        return true;
    if (value == "false" || value == "0" || value == "no")
        return false;
    bad_value(key, value, "a boolean");
}

std::vector<double> to_real_list(const std::string &key, const std::string &value)
{
    std::vector<double> out;
    if (value.find(':') != std::string::npos)
    {
        std::vector<std::string> parts;
        std::stringstream in(value);
        std::string part;
        while (std::getline(in, part, ':'))
            parts.push_back(trim(part));
        if (parts.size() != 3)
            bad_value(key, value, "a start:stop:step range");
        const double start = to_real(key, parts[0]);
        const double stop = to_real(key, parts[1]);
        const double step = to_real(key, parts[2]);
        if (!(step > 0) || stop < start)
            bad_value(key, value, "an ascending range with positive step");
        const long long count = std::llround(std::floor((stop - start) / step + 1e-9)) + 1;
        for (long long i = 0; i < count; ++i)
            out.push_back(start + double(i) * step);
        return out;
    }
    for (const auto &item : split_list(value))
        out.push_back(to_real(key, item));
    return out;
}

ArrayGeometry to_geometry(const std::string &key, const std::string &value, int count, double spacing)
{
    if (value == "linear")
        return ArrayGeometry::linear(count, spacing);
    if (value.rfind("planar", 0) == 0)
    {
        const std::string dims = trim(value.substr(6));
        const auto x = dims.find('x');
        if (x == std::string::npos)
            bad_value(key, value, "'planar RxC'");
        const int rows = int(to_integer(key, trim(dims.substr(0, x))));
        const int cols = int(to_integer(key, trim(dims.substr(x + 1))));
        if (rows * cols != count)
            throw Error("spec", "key '" + key + "': planar dimensions do not match the antenna count");
        return ArrayGeometry::planar(rows, cols, spacing);
    }
    bad_value(key, value, "'linear' or 'planar RxC'");
}

std::string format_list(const std::vector<double> &values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, values[i]);
        out += (i ? ", " : "") + std::string(buf, res.ptr);
    }
    return out;
}

const std::set<std::string> option_keys{"max_outer",      "tolerance", "max_inner",     "armijo",
                                        "backtrack",      "max_backtracks", "n_c",      "omp_oversample",
                                        "kmeans_sweeps", "exhaustive_width"};

void apply_option(SolverSettings &s, const std::string &key, const std::string &name, const std::string &value)
{
    if (name == "max_outer")
        s.altmin.max_outer = int(to_integer(key, value));
    else if (name == "tolerance")
        s.altmin.tolerance = to_real(key, value);
    else if (name == "max_inner")
        s.altmin.max_inner = int(to_integer(key, value));
    else if (name == "armijo")
        s.altmin.armijo = to_real(key, value);
    else if (name == "backtrack")
        s.altmin.backtrack = to_real(key, value);
    else if (name == "max_backtracks")
        s.altmin.max_backtracks = int(to_integer(key, value));
    else if (name == "n_c")
        s.n_c = int(to_integer(key, value));
    else if (name == "omp_oversample")
        s.omp_oversample = int(to_integer(key, value));
    else if (name == "kmeans_sweeps")
        s.kmeans.max_sweeps = int(to_integer(key, value));
    else if (name == "exhaustive_width")
        s.fps.exhaustive_width = int(to_integer(key, value));
    else
        throw Error("spec", "unknown option '" + key + "'");
}

} // namespace

std::string to_string(SweepVariable v)
{
    switch (v)
    {
    case SweepVariable::none:
        return "none";
    case SweepVariable::n_rf:
        return "n_rf";
    case SweepVariable::n_c:
        return "n_c";
    case SweepVariable::eta:
        return "eta";
    case SweepVariable::snr:
        return "snr";
    }
    return "none";
}

SweepVariable parse_sweep_variable(const std::string &text)
{
    for (auto v : {SweepVariable::none, SweepVariable::n_rf, SweepVariable::n_c, SweepVariable::eta, SweepVariable::snr})
        if (to_string(v) == text)
            return v;
    throw Error("spec", "unknown sweep variable '" + text + "'");
}

std::vector<double> default_snr_grid() { return {-15, -10, -5, 0, 5, 10, 15}; }

ExperimentSpec rebuild_spec(std::map<std::string, std::string> entries)
{
    static const std::set<std::string> known{
        "config.n_t",      "config.n_r",        "config.k_users",   "config.subcarriers",
        "config.n_s",      "config.n_rf_t",     "config.n_rf_r",    "config.eta",
        "channel.clusters", "channel.rays",     "channel.angle_spread_deg", "channel.delay_taps",
        "array.tx",        "array.rx",          "array.spacing",    "algorithms",
        "snr_db",          "sweep.variable",    "sweep.values",     "trials",
        "seed",            "threads",           "output.path",      "output.format",
        "options.timing"};

    ExperimentSpec spec;
    auto get = [&](const std::string &key) -> const std::string * {
        const auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    };
    auto integer = [&](const std::string &key, long long fallback, bool required = false) {
        if (const auto *v = get(key))
            return to_integer(key, *v);
        if (required)
            throw Error("spec", "missing required key '" + key + "'");
        return fallback;
    };

    for (const auto &[key, value] : entries)
    {
        if (known.count(key))
            continue;
        if (key.rfind("options.", 0) == 0)
        {
            const std::string rest = key.substr(8);
            const auto dot = rest.find('.');
            const std::string name = dot == std::string::npos ? rest : rest.substr(dot + 1);
            if (!option_keys.count(name))
                throw Error("spec", "unknown option '" + key + "'");
            if (dot != std::string::npos)
                parse_algorithm(rest.substr(0, dot)); // throws on an unknown solver
            continue;
        }
        throw Error("spec", "unknown key '" + key + "'");
    }

    auto &c = spec.config;
    c.n_t = int(integer("config.n_t", 0, true));
    c.n_r = int(integer("config.n_r", 0, true));
    c.n_s = int(integer("config.n_s", 0, true));
    c.k_users = int(integer("config.k_users", 1));
    c.subcarriers = int(integer("config.subcarriers", 1));
    c.n_rf_t = int(integer("config.n_rf_t", std::int64_t(c.k_users) * c.n_s));
    c.n_rf_r = int(integer("config.n_rf_r", c.n_s));
    spec.eta = int(integer("config.eta", 1));
    c.mapping = spec.eta > 1 ? Mapping::group(spec.eta) : Mapping::fully();

    spec.channel.n_clusters = int(integer("channel.clusters", spec.channel.n_clusters));
    spec.channel.n_rays = int(integer("channel.rays", spec.channel.n_rays));
    spec.channel.delay_taps = int(integer("channel.delay_taps", spec.channel.delay_taps));
    spec.channel.subcarriers = c.subcarriers;
    if (const auto *v = get("channel.angle_spread_deg"))
        spec.channel.angle_spread_deg = to_real("channel.angle_spread_deg", *v);

    const double spacing = get("array.spacing") ? to_real("array.spacing", *get("array.spacing")) : 0.5;
    spec.tx = to_geometry("array.tx", get("array.tx") ? *get("array.tx") : "linear", c.n_t, spacing);
    spec.rx = to_geometry("array.rx", get("array.rx") ? *get("array.rx") : "linear", c.n_r, spacing);

    SolverSettings global;
    for (const auto &[key, value] : entries)
        if (key.rfind("options.", 0) == 0 && key != "options.timing" && key.find('.', 8) == std::string::npos)
            apply_option(global, key, key.substr(8), value);
    if (const auto *v = get("options.timing"))
        spec.timing = to_bool("options.timing", *v);

    const auto *algs = get("algorithms");
    if (!algs)
        throw Error("spec", "missing required key 'algorithms'");
    for (const auto &name : split_list(*algs))
    {
        AlgorithmEntry entry{parse_algorithm(name), global};
        const std::string prefix = "options." + name + ".";
        for (const auto &[key, value] : entries)
            if (key.rfind(prefix, 0) == 0)
                apply_option(entry.settings, key, key.substr(prefix.size()), value);
        spec.algorithms.push_back(entry);
    }

    spec.snr_db = get("snr_db") ? to_real_list("snr_db", *get("snr_db")) : default_snr_grid();
    spec.sweep = get("sweep.variable") ? parse_sweep_variable(*get("sweep.variable")) : SweepVariable::none;
    if (const auto *v = get("sweep.values"))
        spec.sweep_values = to_real_list("sweep.values", *v);
    spec.trials = int(integer("trials", spec.trials));
    spec.seed = std::uint64_t(integer("seed", 0));
    spec.threads = int(integer("threads", 1));
    if (const auto *v = get("output.path"))
        spec.output_path = *v;
    if (const auto *v = get("output.format"))
        spec.output_format = *v;

    // canonical echo of the effective values
    entries["config.n_t"] = std::to_string(c.n_t);
    entries["config.n_r"] = std::to_string(c.n_r);
    entries["config.n_s"] = std::to_string(c.n_s);
    entries["config.k_users"] = std::to_string(c.k_users);
    entries["config.subcarriers"] = std::to_string(c.subcarriers);
    entries["config.n_rf_t"] = std::to_string(c.n_rf_t);
    entries["config.n_rf_r"] = std::to_string(c.n_rf_r);
    entries["config.eta"] = std::to_string(spec.eta);
    entries["channel.clusters"] = std::to_string(spec.channel.n_clusters);
    entries["channel.rays"] = std::to_string(spec.channel.n_rays);
    entries["channel.delay_taps"] = std::to_string(spec.channel.delay_taps);
    entries["channel.angle_spread_deg"] = format_list({spec.channel.angle_spread_deg});
    entries["array.spacing"] = format_list({spacing});
    entries.try_emplace("array.tx", "linear");
    entries.try_emplace("array.rx", "linear");
    entries["snr_db"] = format_list(spec.snr_db);
    entries["sweep.variable"] = to_string(spec.sweep);
    entries["sweep.values"] = format_list(spec.sweep_values);
    entries["trials"] = std::to_string(spec.trials);
    entries["seed"] = std::to_string(spec.seed);
    entries["threads"] = std::to_string(spec.threads);
    entries["output.path"] = spec.output_path;
    entries["output.format"] = spec.output_format;
    entries["options.timing"] = spec.timing ? "true" : "false";
    spec.entries = std::move(entries);
    return spec;
}

ExperimentSpec parse_spec(std::istream &in)
{
    std::map<std::string, std::string> entries;
    std::string line;
    int number = 0;
    while (std::getline(in, line))
    {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("spec", "line " + std::to_string(number) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw Error("spec", "line " + std::to_string(number) + ": empty key");
        if (!entries.emplace(key, value).second)
            throw Error("spec", "line " + std::to_string(number) + ": duplicate key '" + key + "'");
    }
    return rebuild_spec(std::move(entries));
}

ExperimentSpec parse_spec_text(const std::string &text)
{
    std::istringstream in(text);
    return parse_spec(in);
}

ExperimentSpec load_spec(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("io", "cannot open spec file '" + path + "'");
    return parse_spec(in);
}

void validate(const ExperimentSpec &spec)
{
    validate(spec.channel);
    validate(spec.tx);
    validate(spec.rx);
    if (spec.algorithms.empty())
        throw Error("spec", "at least one algorithm is required");
    if (spec.trials < 1)
        throw Error("spec", "trials must be positive");
    if (spec.threads < 1)
        throw Error("spec", "threads must be positive");
    if (spec.output_format != "csv")
        throw Error("spec", "only the csv output format is supported");
    if (spec.sweep == SweepVariable::none && !spec.sweep_values.empty())
        throw Error("spec", "sweep values given without a sweep variable");
    if (spec.sweep != SweepVariable::none && spec.sweep_values.empty())
        throw Error("spec", "sweep list is empty");
    if (spec.sweep != SweepVariable::snr && spec.snr_db.empty())
        throw Error("spec", "SNR grid is empty");
    for (const auto &a : spec.algorithms)
        validate(a.settings.altmin);

    auto check = [&](HybridConfig cfg, int eta, int n_c) {
        cfg.mapping = eta > 1 ? Mapping::group(eta) : Mapping::fully();
        validate(cfg);
        if (n_c < 1)
            throw Error("spec", "bank size must be positive");
        const bool nested = std::any_of(spec.algorithms.begin(), spec.algorithms.end(),
                                        [](const AlgorithmEntry &a) { return info(a.id).fully_connected; });
        if (nested && eta > 1 && (cfg.n_r % eta != 0 || cfg.n_rf_r % eta != 0))
            throw Error("spec", "group count must divide N_r and the receive RF chain count");
    };
    auto integral = [](double v) {
        if (v != std::floor(v) || v < 1 || v > 1e9)
            throw Error("spec", "sweep value must be a positive integer");
        return int(v);
    };
    for (const auto &a : spec.algorithms)
    {
        if (spec.sweep == SweepVariable::none || spec.sweep == SweepVariable::snr)
            check(spec.config, spec.eta, a.settings.n_c);
        for (double v : spec.sweep_values)
        {
            HybridConfig cfg = spec.config;
            switch (spec.sweep)
            {
            case SweepVariable::n_rf:
                cfg.n_rf_t = integral(v);
                check(cfg, spec.eta, a.settings.n_c);
                break;
            case SweepVariable::n_c:
                check(cfg, spec.eta, integral(v));
                break;
            case SweepVariable::eta:
                check(cfg, integral(v), a.settings.n_c);
                break;
            default:
                break;
            }
        }
    }
}

} // namespace hbf::harness
