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

#include <pimfw/fw_core.hpp>
#include <pimfw/graph_io.hpp>

#include "catch_amalgamated.hpp"

#include <filesystem>
#include <functional>
#include <queue>
#include <random>

using namespace pimfw;

namespace {

// Minimum over all simple paths, by exhaustive DFS. Only feasible for tiny n,
// but shares nothing with the min-plus kernels.
DistanceMatrix simple_path_oracle(const DistanceMatrix& d) {
  const Index n = d.rows();
  DistanceMatrix out = unreachable_matrix(n);
  std::vector<bool> seen(static_cast<std::size_t>(n));
  std::function<void(Index, Index, std::uint64_t)> walk = [&](Index src, Index at, std::uint64_t len) {
    if (len < out(src, at)) out(src, at) = static_cast<Distance>(len);
    for (Index v = 0; v < n; ++v) {
      if (seen[v] || d(at, v) == kInf || v == at) continue;
      seen[v] = true;
      walk(src, v, len + d(at, v));
      seen[v] = false;
    }
  };
  for (Index s = 0; s < n; ++s) {
    seen.assign(seen.size(), false);
    seen[s] = true;
    walk(s, s, 0);
  }
  return out;
}

// Dijkstra from every source, 64-bit lengths.
DistanceMatrix dijkstra_oracle(const DistanceMatrix& d) {
  const Index n = d.rows();
  DistanceMatrix out = unreachable_matrix(n);
  using Item = std::pair<std::uint64_t, Index>;
  for (Index s = 0; s < n; ++s) {
    std::vector<std::uint64_t> dist(static_cast<std::size_t>(n), UINT64_MAX);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[s] = 0;
    pq.push({0, s});
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (du != dist[u]) continue;
      for (Index v = 0; v < n; ++v) {
        if (v == u || d(u, v) == kInf) continue;
        if (du + d(u, v) < dist[v]) {
          dist[v] = du + d(u, v);
          pq.push({dist[v], v});
        }
      }
    }
    for (Index v = 0; v < n; ++v)
      if (dist[v] != UINT64_MAX) out(s, v) = static_cast<Distance>(dist[v]);
  }
  return out;
}

DistanceMatrix random_graph(Index n, double density, std::uint64_t seed, Distance hi = 100) {
  return build_distance_matrix(gen_synthetic(static_cast<std::size_t>(n), density, {1, hi}, seed));
}

Tile random_tile(Index b, std::mt19937_64& rng, double inf_fraction) {
  std::uniform_int_distribution<Distance> w(0, 1000);
  std::bernoulli_distribution inf(inf_fraction);
  Tile t(b, b);
  for (Index i = 0; i < b; ++i)
    for (Index j = 0; j < b; ++j) t(i, j) = inf(rng) ? kInf : w(rng);
  return t;
}

}  // namespace

TEST_CASE("saturating min-plus") {
  REQUIRE(saturating_add<Distance>(kInf, 5) == kInf);
  REQUIRE(saturating_add<Distance>(kInf - 1, 5) == kInf);
  REQUIRE(saturating_add<Distance>(3, 4) == 7);
  REQUIRE(min_plus<Distance>(10, 3, 4) == 7);
  REQUIRE(min_plus<Distance>(5, 3, 4) == 5);
  REQUIRE(min_plus<Distance>(kInf, kInf, 1) == kInf);
  REQUIRE(min_plus<std::uint16_t>(9, 0xfff0, 0x20) == 9);
}

TEST_CASE("reference FW on the sample graph") {
  const auto p = std::filesystem::path(PIMFW_SOURCE_DIR) / "data" / "tiny.txt";
  const auto d = fw_reference(build_distance_matrix(load_edge_list(p, true)));
  // frozen from an independent Dijkstra implementation
  const Distance expected[8][8] = {
      {0, 3, 1, 8, 11, 12, 17, 16}, {22, 0, 23, 5, 8, 9, 14, 13}, {24, 2, 0, 7, 10, 11, 16, 15},
      {17, 20, 18, 0, 3, 4, 9, 8},  {14, 17, 15, 3, 0, 1, 6, 5},  {13, 16, 14, 2, 5, 0, 11, 4},
      {10, 13, 11, 18, 21, 22, 0, 1}, {9, 12, 10, 17, 20, 21, 26, 0},
  };
  for (Index i = 0; i < 8; ++i)
    for (Index j = 0; j < 8; ++j) REQUIRE(d(i, j) == expected[i][j]);
}

TEST_CASE("reference FW matches exhaustive simple paths, n <= 6") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Index n = 2 + static_cast<Index>(seed % 5);
    const double density = std::array{0.15, 0.4, 0.8, 1.0}[seed % 4];
    const auto d = random_graph(n, density, seed, 20);
    INFO("seed " << seed);
    REQUIRE(fw_reference(d) == simple_path_oracle(d));
  }
}

TEST_CASE("reference FW matches Dijkstra") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto d = random_graph(48, 0.08 * static_cast<double>(seed), seed);
    REQUIRE(fw_reference(d) == dijkstra_oracle(d));
  }
}

TEST_CASE("tile min-plus matches brute force") {
  std::mt19937_64 rng(42);
  for (Index b : {1, 2, 3, 8}) {
    const Tile c = random_tile(b, rng, 0.3);
    const Tile a = random_tile(b, rng, 0.3);
    const Tile bb = random_tile(b, rng, 0.3);
    Tile expect = c;
    for (Index i = 0; i < b; ++i)
      for (Index j = 0; j < b; ++j)
        for (Index t = 0; t < b; ++t) {
          if (a(i, t) == kInf || bb(t, j) == kInf) continue;
          const std::uint64_t s = std::uint64_t{a(i, t)} + bb(t, j);
          if (s < expect(i, j)) expect(i, j) = static_cast<Distance>(s);
        }
    REQUIRE(tile_minplus_update(c, a, bb) == expect);
  }
  REQUIRE_THROWS_AS(tile_minplus_update(Tile(2, 2), Tile(3, 3), Tile(2, 2)), DimensionError);
  REQUIRE_THROWS_AS(tile_fw(Tile(2, 3)), DimensionError);
}

TEST_CASE("tile FW equals reference FW on the tile") {
  std::mt19937_64 rng(5);
  Tile t = random_tile(7, rng, 0.5);
  for (Index i = 0; i < 7; ++i) t(i, i) = 0;
  REQUIRE(tile_fw(t) == fw_reference(DistanceMatrix(t)));
}

TEST_CASE("kernels are generic over the scalar type") {
  DistanceMatrixT<std::uint16_t> a(3, 3);
  const auto inf = kInfinity<std::uint16_t>;
  a << 0, 4, inf, inf, 0, 1, 2, inf, 0;
  tile_fw_inplace(a);
  REQUIRE(a(0, 2) == 5);
  REQUIRE(a(2, 1) == 6);
}

TEST_CASE("trace shape and ordering") {
  for (Index m : {1, 2, 3, 5}) {
    const auto trace = blocked_trace(m);
    REQUIRE(trace.size() == expected_trace_length(static_cast<std::size_t>(m)));
    std::size_t idx = 0;
    for (Index k = 0; k < m; ++k) {
      REQUIRE(trace[idx].phase == Phase::PivotFW);
      REQUIRE(trace[idx].target == TileCoord{k, k});
      ++idx;
      for (; idx < trace.size() && trace[idx].k == k && trace[idx].phase != Phase::Remaining; ++idx) {
        const auto& op = trace[idx];
        if (op.phase == Phase::PivotRow) {
          REQUIRE(op.target.i == k);
          REQUIRE(op.sources()[0] == TileCoord{k, k});
        } else {
          REQUIRE(op.phase == Phase::PivotCol);
          REQUIRE(op.target.j == k);
        }
      }
      for (; idx < trace.size() && trace[idx].k == k; ++idx) {
        const auto& op = trace[idx];
        REQUIRE(op.phase == Phase::Remaining);
        REQUIRE(op.target.i != k);
        REQUIRE(op.target.j != k);
        REQUIRE(op.sources()[0] == TileCoord{op.target.i, k});
        REQUIRE(op.sources()[1] == TileCoord{k, op.target.j});
      }
    }
    REQUIRE(idx == trace.size());
  }
  REQUIRE(expected_trace_length(16) == 16u * 16u * 16u);
}

TEST_CASE("blocked FW equals reference, with and without padding") {
  std::uint64_t seed = 100;
  for (Index n : {8, 16, 33}) {
    for (double density : {0.1, 0.5, 1.0}) {
      for (Index b : std::array<Index, 5>{2, 4, 5, 16, n}) {
        const auto d = random_graph(n, density, ++seed);
        const auto expect = fw_reference(d);
        const auto r = fw_blocked(to_tile_major(d, b));
        INFO("n=" << n << " b=" << b << " density=" << density);
        REQUIRE(from_tile_major(r.matrix, n) == expect);
        REQUIRE(r.trace == blocked_trace(tiles_per_row(n, b)));
      }
    }
  }
}

TEST_CASE("fault injection breaks equality") {
  const auto d = random_graph(32, 0.5, 9);
  const auto r = fw_blocked(to_tile_major(d, 8), FaultInjection{3});
  REQUIRE_FALSE(from_tile_major(r.matrix, 32) == fw_reference(d));
}
