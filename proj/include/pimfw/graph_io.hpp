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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace pimfw {

struct Edge {
  std::uint32_t src = 0;
  std::uint32_t dst = 0;
  Distance weight = 1;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Edges are sorted by (src, dst), unique, self-loop free, and every weight is
// finite.
struct EdgeList {
  std::size_t num_vertices = 0;
  std::vector<Edge> edges;

  friend bool operator==(const EdgeList&, const EdgeList&) = default;
};

/// Parses a SNAP-style edge list. Lines are '#' comments, blank, or
/// whitespace-separated "u v" / "u v w" records. Identifiers are re-indexed
/// densely in order of first appearance, a missing weight means 1, duplicate
/// edges keep the minimum weight and self-loops are dropped.
///
/// Throws ParseError (with the 1-based line number) on malformed records and
/// RangeError when a weight cannot be represented below INF.
EdgeList parse_edge_list(std::istream& in, bool directed);
EdgeList parse_edge_list(std::string_view text, bool directed);
EdgeList load_edge_list(const std::filesystem::path& path, bool directed);

DistanceMatrix build_distance_matrix(const EdgeList& edges);

struct WeightRange {
  Distance lo = 1;
  Distance hi = 1;
};

/// Erdos-Renyi style digraph: every ordered pair u != v is kept with
/// probability `density`, weights uniform in [lo, hi]. Deterministic per seed.
EdgeList gen_synthetic(std::size_t n, double density, WeightRange weights, std::uint64_t seed);

// M x M grid of B x B tiles stored contiguously in tile-major order.
struct TiledMatrix {
  Index n = 0;  // padded dimension, multiple of b
  Index b = 0;
  Index m = 0;
  std::vector<Tile> tiles;

  Tile& tile(Index i, Index j) { return tiles[static_cast<std::size_t>(i * m + j)]; }
  const Tile& tile(Index i, Index j) const { return tiles[static_cast<std::size_t>(i * m + j)]; }

  friend bool operator==(const TiledMatrix& a, const TiledMatrix& b);
};

Index tiles_per_row(Index n, Index b);

// Pads to the next multiple of b with zero diagonal and INF off-diagonal, so
// no padded vertex shortens a path.
TiledMatrix to_tile_major(const DistanceMatrix& d, Index b);
DistanceMatrix from_tile_major(const TiledMatrix& t, Index original_n);

// Debug dump: one row per line, comma separated, "INF" for the sentinel.
void write_matrix_csv(std::ostream& out, const DistanceMatrix& d);
DistanceMatrix read_matrix_csv(std::istream& in);

}  // namespace pimfw
