/*
 * Copyright 2026 The pimfw Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <pimfw/types.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <limits>

namespace pimfw {

// Min-plus scalar arithmetic over unsigned distances. The maximum
// representable value is the "no path" sentinel and is absorbing for addition.

template <std::unsigned_integral Scalar>
inline constexpr Scalar kInfinity = std::numeric_limits<Scalar>::max();

template <std::unsigned_integral Scalar>
constexpr Scalar saturating_add(Scalar a, Scalar b) noexcept {
  if (a > kInfinity<Scalar> - b) return kInfinity<Scalar>;
  return static_cast<Scalar>(a + b);
}

template <std::unsigned_integral Scalar>
constexpr Scalar min_plus(Scalar d_ij, Scalar d_ik, Scalar d_kj) noexcept {
  return std::min(d_ij, saturating_add(d_ik, d_kj));
}

using Distance = std::uint32_t;
inline constexpr Distance kInf = kInfinity<Distance>;
inline constexpr unsigned kOperandBits = 32;

// Row-major so a tile row is contiguous, like a DRAM row.
template <typename Scalar>
using DistanceMatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using DistanceMatrix = DistanceMatrixT<Distance>;
using Tile = DistanceMatrix;

// n x n matrix with zero diagonal and INF elsewhere.
template <typename Scalar = Distance>
DistanceMatrixT<Scalar> unreachable_matrix(Index n) {
  DistanceMatrixT<Scalar> d = DistanceMatrixT<Scalar>::Constant(n, n, kInfinity<Scalar>);
  d.diagonal().setZero();
  return d;
}

}  // namespace pimfw
