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

#ifndef HBF_TYPES_HPP
#define HBF_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hbf
{

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

// Connectivity pattern of an analog network (true = RF chain wired to antenna).
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;

// Every failure raised by the library carries a short machine-readable tag
// (e.g. "rank-deficient", "domain", "dimension") next to the human message.
class Error : public std::runtime_error
{
  public:
    Error(std::string tag, const std::string &message)
        : std::runtime_error(message), tag_(std::move(tag))
    {
    }

    const std::string &tag() const noexcept { return tag_; }

  private:
    std::string tag_;
};

template <typename Real>
inline constexpr Real pi_v = Real(3.141592653589793238462643383279502884L);

// Frobenius inner product Re tr(A^H B), the metric used on the product-of-circles manifold.
template <typename DerivedA, typename DerivedB>
auto real_inner(const Eigen::MatrixBase<DerivedA> &a, const Eigen::MatrixBase<DerivedB> &b)
{
    return (a.conjugate().cwiseProduct(b)).sum().real();
}

} // namespace hbf

#endif
