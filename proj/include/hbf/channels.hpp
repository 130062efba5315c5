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

#ifndef HBF_CHANNELS_HPP
#define HBF_CHANNELS_HPP

#include "hbf/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace hbf
{

enum class ArrayKind
{
    uniform_linear,
    uniform_planar,
};

struct ArrayGeometry
{
    ArrayKind kind = ArrayKind::uniform_linear;
    int count = 1;
    double spacing = 0.5;           // in wavelengths
    std::pair<int, int> dims{1, 1}; // planar only, rows x cols

    static ArrayGeometry linear(int count, double spacing = 0.5)
    {
        return {ArrayKind::uniform_linear, count, spacing, {count, 1}};
    }

    static ArrayGeometry planar(int rows, int cols, double spacing = 0.5)
    {
        return {ArrayKind::uniform_planar, rows * cols, spacing, {rows, cols}};
    }
};

inline void validate(const ArrayGeometry &g)
{
    if (g.count < 1)
        throw Error("geometry", "array needs at least one antenna");
    if (!(g.spacing > 0.0))
        throw Error("geometry", "element spacing must be positive");
    if (g.kind == ArrayKind::uniform_planar &&
        (g.dims.first < 1 || g.dims.second < 1 || g.dims.first * g.dims.second != g.count))
        throw Error("geometry", "planar dimensions must multiply to the element count");
}

/// Far-field steering vector with unit norm.
///
/// Linear arrays use phase 2*pi*d*n*sin(azimuth) on element n; elevation is
/// ignored. Planar arrays use the separable form
/// 2*pi*d*(m*sin(azimuth)*sin(elevation) + n*cos(elevation)) with element
/// index m*cols + n.
template <typename Real = double>
CVector<Real> array_response(const ArrayGeometry &g, Real azimuth, Real elevation = Real(0))
{
    validate(g);
    using std::cos;
    using std::sin;
    const Real k = Real(2) * pi_v<Real> * Real(g.spacing);
    const Real scale = Real(1) / std::sqrt(Real(g.count));
    CVector<Real> a(g.count);
    if (g.kind == ArrayKind::uniform_linear)
    {
        for (int n = 0; n < g.count; ++n)
            a(n) = std::polar(scale, k * Real(n) * sin(azimuth));
        return a;
    }
    const auto [rows, cols] = g.dims;
    for (int m = 0; m < rows; ++m)
        for (int n = 0; n < cols; ++n)
            a(m * cols + n) =
                std::polar(scale, k * (Real(m) * sin(azimuth) * sin(elevation) + Real(n) * cos(elevation)));
    return a;
}

struct ChannelParams
{
    int n_clusters = 5;
    int n_rays = 10;
    double angle_spread_deg = 10.0;
    int subcarriers = 1;
    int delay_taps = 1;
    std::uint64_t seed = 0;
};

inline void validate(const ChannelParams &p)
{
    if (p.n_clusters < 1 || p.n_rays < 1)
        throw Error("channel", "cluster and ray counts must be positive");
    if (p.subcarriers < 1 || p.delay_taps < 1 || p.delay_taps > p.subcarriers)
        throw Error("channel", "delay taps must lie in [1, subcarriers]");
    if (!(p.angle_spread_deg >= 0.0))
        throw Error("channel", "angle spread must be non-negative");
}

// One propagation path of a user's channel; kept so codebooks can be built from the true geometry.
struct PathInfo
{
    int cluster = 0;
    int tap = 0;
    double tx_azimuth = 0, tx_elevation = 0;
    double rx_azimuth = 0, rx_elevation = 0;
    std::complex<double> gain{};
};

template <typename Real = double>
struct ChannelSet
{
    int users = 0;
    ChannelParams params;
    ArrayGeometry tx;
    ArrayGeometry rx;
    std::vector<std::vector<CMatrix<Real>>> matrices; // [user][subcarrier], each N_r x N_t
    std::vector<std::vector<PathInfo>> paths;         // [user][path]

    int subcarriers() const { return params.subcarriers; }
    const CMatrix<Real> &operator()(int user, int subcarrier) const { return matrices[user][subcarrier]; }
};

// Largest number of complex entries a single generate_channels call may allocate.
inline constexpr std::int64_t default_channel_entry_cap = std::int64_t(1) << 27;

namespace detail
{

inline double sample_laplacian(std::mt19937_64 &rng, double scale)
{
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    const double x = u(rng);
    const double sign = x < 0 ? -1.0 : 1.0;
    return -scale * sign * std::log1p(-2.0 * std::abs(x));
}

} // namespace detail

/// Clustered (Saleh-Valenzuela) channel realizations for `users` receivers.
///
/// Clusters are assigned to delay taps round-robin; the frequency response on
/// subcarrier f is sum_d H_d exp(-j 2 pi f d / F). Each tap is scaled by
/// sqrt(N_t N_r / (clusters * rays)) so that E||H_f||_F^2 = N_t N_r.
template <typename Real = double>
ChannelSet<Real> generate_channels(const ChannelParams &params, const ArrayGeometry &tx, const ArrayGeometry &rx,
                                   int users, std::int64_t entry_cap = default_channel_entry_cap)
{
    validate(params);
    validate(tx);
    validate(rx);
    if (users < 1)
        throw Error("channel", "at least one user is required");
    const std::int64_t entries = std::int64_t(tx.count) * rx.count * users * params.subcarriers;
    if (entries > entry_cap)
        throw Error("dimension", "channel set of " + std::to_string(entries) + " entries exceeds the configured cap");

    constexpr double two_pi = 2.0 * pi_v<double>;
    const double spread = params.angle_spread_deg * pi_v<double> / 180.0;
    const double laplace_scale = spread / std::sqrt(2.0);
    const int n_paths = params.n_clusters * params.n_rays;
    const Real gain_scale = std::sqrt(Real(tx.count) * Real(rx.count) / Real(n_paths));
    const int taps = params.delay_taps;
    const int n_sc = params.subcarriers;

    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> uniform_angle(0.0, two_pi);
    std::uniform_real_distribution<double> uniform_elevation(0.0, pi_v<double>);
    std::normal_distribution<double> normal(0.0, 1.0);

    ChannelSet<Real> out;
    out.users = users;
    out.params = params;
    out.tx = tx;
    out.rx = rx;
    out.matrices.resize(users);
    out.paths.resize(users);

    for (int k = 0; k < users; ++k)
    {
        std::vector<CMatrix<Real>> tap_matrices(taps, CMatrix<Real>::Zero(rx.count, tx.count));
        auto &paths = out.paths[k];
        paths.reserve(n_paths);
        for (int c = 0; c < params.n_clusters; ++c)
        {
            const double tx_az_c = uniform_angle(rng);
            const double rx_az_c = uniform_angle(rng);
            const double tx_el_c = uniform_elevation(rng);
            const double rx_el_c = uniform_elevation(rng);
            const int tap = c % taps;
            for (int r = 0; r < params.n_rays; ++r)
            {
                PathInfo p;
                p.cluster = c;
                p.tap = tap;
                p.tx_azimuth = tx_az_c + detail::sample_laplacian(rng, laplace_scale);
                p.rx_azimuth = rx_az_c + detail::sample_laplacian(rng, laplace_scale);
                p.tx_elevation = tx_el_c + detail::sample_laplacian(rng, laplace_scale);
                p.rx_elevation = rx_el_c + detail::sample_laplacian(rng, laplace_scale);
                const double re = normal(rng);
                const double im = normal(rng);
                p.gain = std::complex<double>(re, im) / std::sqrt(2.0);

                const CVector<Real> a_t = array_response<Real>(tx, Real(p.tx_azimuth), Real(p.tx_elevation));
                const CVector<Real> a_r = array_response<Real>(rx, Real(p.rx_azimuth), Real(p.rx_elevation));
                const Complex<Real> alpha(Real(p.gain.real()), Real(p.gain.imag()));
                tap_matrices[tap].noalias() += (gain_scale * alpha) * a_r * a_t.adjoint();
                paths.push_back(p);
            }
        }

        auto &per_sc = out.matrices[k];
        per_sc.reserve(n_sc);
        for (int f = 0; f < n_sc; ++f)
        {
            CMatrix<Real> h = tap_matrices[0];
            for (int d = 1; d < taps; ++d)
            {
                const Real phase = -Real(two_pi) * Real(f) * Real(d) / Real(n_sc);
                h += std::polar(Real(1), phase) * tap_matrices[d];
            }
            per_sc.push_back(std::move(h));
        }
    }
    return out;
}

// Transmit-side steering vectors of every path of every user, one column each.
template <typename Real = double>
CMatrix<Real> tx_path_responses(const ChannelSet<Real> &ch)
{
    Index total = 0;
    for (const auto &p : ch.paths)
        total += Index(p.size());
    CMatrix<Real> out(ch.tx.count, total);
    Index col = 0;
    for (const auto &user_paths : ch.paths)
        for (const auto &p : user_paths)
            out.col(col++) = array_response<Real>(ch.tx, Real(p.tx_azimuth), Real(p.tx_elevation));
    return out;
}

template <typename Real = double>
CMatrix<Real> rx_path_responses(const ChannelSet<Real> &ch, int user)
{
    const auto &user_paths = ch.paths.at(user);
    CMatrix<Real> out(ch.rx.count, Index(user_paths.size()));
    Index col = 0;
    for (const auto &p : user_paths)
        out.col(col++) = array_response<Real>(ch.rx, Real(p.rx_azimuth), Real(p.rx_elevation));
    return out;
}

} // namespace hbf

#endif
