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

#ifndef HBF_BEAMFORMER_HPP
#define HBF_BEAMFORMER_HPP

#include "hbf/analog.hpp"
#include "hbf/types.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace hbf
{

// Diagnostics a solver leaves behind. `objective` holds ||F_opt - F_RF F_BB||_F^2
// after every completed iteration, before any power normalization.
struct SolverTrace
{
    std::vector<double> objective;
    int iterations = 0;
    bool converged = false;
    bool repeated_selection = false; // OMP picked a candidate twice
    int line_search_failures = 0;
    std::vector<std::string> notes;
};

template <typename Real = double>
struct BeamformerPair
{
    AnalogNetwork<Real> analog;
    CMatrix<Real> digital; // N_RF x (K N_s F), user-major then subcarrier
    SolverTrace trace;

    CMatrix<Real> product() const { return analog.matrix * digital; }
};

/// Scales the digital matrix so that ||F_RF F_BB||_F^2 equals `budget`
/// (K N_s F for a transmitter). The analog network is left untouched.
template <typename Real>
BeamformerPair<Real> power_normalize(BeamformerPair<Real> pair, Real budget)
{
    const Real norm = pair.product().norm();
    if (!(norm > Real(0)) || !std::isfinite(norm))
        throw Error("power", "cannot normalize a zero or non-finite hybrid beamformer");
    pair.digital *= std::sqrt(budget) / norm;
    return pair;
}

template <typename Real>
Real approximation_residual(const CMatrix<Real> &f_opt, const CMatrix<Real> &analog, const CMatrix<Real> &digital)
{
    if (analog.rows() != f_opt.rows() || digital.cols() != f_opt.cols() || analog.cols() != digital.rows())
        throw Error("dimension", "hybrid factor shapes do not match the target");
    return (f_opt - analog * digital).norm();
}

template <typename Real>
Real approximation_residual(const CMatrix<Real> &f_opt, const BeamformerPair<Real> &pair)
{
    return approximation_residual<Real>(f_opt, pair.analog.matrix, pair.digital);
}

// Least-squares digital matrix for a fixed analog matrix (minimum-norm when rank deficient).
template <typename Real>
CMatrix<Real> least_squares_digital(const CMatrix<Real> &analog, const CMatrix<Real> &target)
{
    return analog.completeOrthogonalDecomposition().solve(target);
}

} // namespace hbf

#endif
