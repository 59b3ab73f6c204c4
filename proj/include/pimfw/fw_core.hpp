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

#include <pimfw/distance.hpp>
#include <pimfw/graph_io.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace pimfw {

enum class Phase : std::uint8_t { PivotFW, PivotRow, PivotCol, Remaining };

std::string_view to_string(Phase p);

struct TileCoord {
  Index i = 0;
  Index j = 0;

  friend bool operator==(const TileCoord&, const TileCoord&) = default;
  friend auto operator<=>(const TileCoord&, const TileCoord&) = default;
};

// One loop body of the blocked algorithm; the ordered stream of these is the
// workload the scheduler times.
struct TileOpRecord {
  Phase phase = Phase::PivotFW;
  Index k = 0;
  TileCoord target;
  std::array<TileCoord, 2> source_storage{};
  std::uint8_t num_sources = 0;

  std::span<const TileCoord> sources() const { return {source_storage.data(), num_sources}; }

  friend bool operator==(const TileOpRecord&, const TileOpRecord&) = default;
};

/// In-tile Floyd-Warshall, k-outermost.
template <typename Derived>
void tile_fw_inplace(Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  const Index b = a.rows();
  for (Index k = 0; k < b; ++k) {
    for (Index i = 0; i < b; ++i) {
      const Scalar d_ik = a(i, k);
      if (d_ik == kInfinity<Scalar>) continue;
      for (Index j = 0; j < b; ++j) a(i, j) = min_plus(a(i, j), d_ik, a(k, j));
    }
  }
}

/// a_ij <- min(a_ij, a_ik (min,+) a_kj), reduction index ascending. The
/// operands must not alias a_ij.
template <typename DerivedOut, typename DerivedL, typename DerivedR>
void tile_minplus_update_inplace(Eigen::MatrixBase<DerivedOut>& a_ij, const Eigen::MatrixBase<DerivedL>& a_ik,
                                 const Eigen::MatrixBase<DerivedR>& a_kj) {
  using Scalar = typename DerivedOut::Scalar;
  const Index rows = a_ij.rows();
  const Index cols = a_ij.cols();
  const Index inner = a_ik.cols();
  for (Index t = 0; t < inner; ++t) {
    for (Index r = 0; r < rows; ++r) {
      const Scalar lhs = a_ik(r, t);
      if (lhs == kInfinity<Scalar>) continue;
      for (Index c = 0; c < cols; ++c) a_ij(r, c) = min_plus(a_ij(r, c), lhs, a_kj(t, c));
    }
  }
}

Tile tile_fw(const Tile& a_kk);
Tile tile_minplus_update(const Tile& a_ij, const Tile& a_ik, const Tile& a_kj);

/// Naive O(n^3) triple loop, the correctness oracle for everything blocked.
DistanceMatrix fw_reference(const DistanceMatrix& d);

// Test-only mutation: the tile op at `op_index` in trace order uses max
// instead of min, so verification harnesses can prove they catch errors.
struct FaultInjection {
  std::size_t op_index = 0;
};

struct BlockedResult {
  TiledMatrix matrix;
  std::vector<TileOpRecord> trace;
};

/// Blocked Floyd-Warshall over an already tiled matrix. Per pivot k: the
/// pivot tile, then pivot row, then pivot column, then the remaining tiles in
/// row-major order. The returned trace lists the ops in execution order.
BlockedResult fw_blocked(TiledMatrix t, std::optional<FaultInjection> fault = std::nullopt);

/// The trace fw_blocked would emit for an m x m tile grid, without values.
std::vector<TileOpRecord> blocked_trace(Index m);
void append_round_trace(Index k, Index m, std::vector<TileOpRecord>& out);

constexpr std::size_t expected_trace_length(std::size_t m) {
  return m == 0 ? 0 : m * (1 + 2 * (m - 1) + (m - 1) * (m - 1));
}

}  // namespace pimfw
