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

#include <pimfw/graph_io.hpp>

#include "catch_amalgamated.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pimfw;

TEST_CASE("edge list: comments, blank lines, default weight") {
  const auto el = parse_edge_list("# header\n\n10 20 3\n20 30\n  # indented comment\n30 10 7\n", true);
  REQUIRE(el.num_vertices == 3);
  // ids re-indexed by first appearance: 10->0, 20->1, 30->2
  REQUIRE(el.edges == std::vector<Edge>{{0, 1, 3}, {1, 2, 1}, {2, 0, 7}});
}

TEST_CASE("edge list: duplicates keep the minimum, self loops dropped") {
  const auto el = parse_edge_list("1 2 9\n1 2 4\n2 2 1\n1 2 6\n", true);
  REQUIRE(el.num_vertices == 2);
  REQUIRE(el.edges == std::vector<Edge>{{0, 1, 4}});
}

TEST_CASE("edge list: undirected adds both directions") {
  const auto el = parse_edge_list("5 6 2\n", false);
  REQUIRE(el.edges == std::vector<Edge>{{0, 1, 2}, {1, 0, 2}});
}

TEST_CASE("edge list: malformed input reports the line") {
  try {
    parse_edge_list("1 2\n3 x\n", true);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    REQUIRE(e.line() == 2);
  }
  REQUIRE_THROWS_AS(parse_edge_list("1\n", true), ParseError);
  REQUIRE_THROWS_AS(parse_edge_list("1 2 3 4\n", true), ParseError);
  REQUIRE_THROWS_AS(parse_edge_list("1 2 -3\n", true), RangeError);
  REQUIRE_THROWS_AS(parse_edge_list("1 2 4294967295\n", true), RangeError);
}

TEST_CASE("edge list: missing file") {
  REQUIRE_THROWS_AS(load_edge_list("/nonexistent/pimfw/graph.txt", true), Error);
}

TEST_CASE("distance matrix from edges") {
  const auto d = build_distance_matrix(parse_edge_list("1 2 5\n2 3 2\n", true));
  REQUIRE(d.rows() == 3);
  REQUIRE(d(0, 0) == 0);
  REQUIRE(d(0, 1) == 5);
  REQUIRE(d(1, 2) == 2);
  REQUIRE(d(0, 2) == kInf);
  REQUIRE(d(2, 0) == kInf);
}

TEST_CASE("synthetic graphs are seed-deterministic") {
  const auto a = gen_synthetic(40, 0.3, {1, 50}, 7);
  const auto b = gen_synthetic(40, 0.3, {1, 50}, 7);
  const auto c = gen_synthetic(40, 0.3, {1, 50}, 8);
  REQUIRE(a == b);
  REQUIRE_FALSE(a == c);
  for (const auto& e : a.edges) {
    REQUIRE(e.src != e.dst);
    REQUIRE(e.weight >= 1);
    REQUIRE(e.weight <= 50);
  }
}

TEST_CASE("synthetic density extremes") {
  REQUIRE_THROWS_AS(gen_synthetic(12, 0.0, {1, 1}, 1), ConfigError);
  REQUIRE(gen_synthetic(12, 1.0, {1, 1}, 1).edges.size() == 12u * 11u);
  REQUIRE_THROWS_AS(gen_synthetic(12, 1.5, {1, 1}, 1), ConfigError);
  REQUIRE_THROWS_AS(gen_synthetic(12, 0.5, {5, 2}, 1), ConfigError);
}

TEST_CASE("tile-major round trip with padding") {
  const auto d = build_distance_matrix(gen_synthetic(10, 0.5, {1, 9}, 3));
  const auto t = to_tile_major(d, 4);
  REQUIRE(t.n == 12);
  REQUIRE(t.m == 3);
  // padded vertices are isolated: 0 on their diagonal, INF elsewhere
  REQUIRE(t.tile(2, 2)(3, 3) == 0);
  REQUIRE(t.tile(2, 2)(2, 3) == kInf);
  REQUIRE(t.tile(0, 2)(1, 3) == kInf);
  REQUIRE(t.tile(1, 0)(1, 2) == d(5, 2));
  REQUIRE(from_tile_major(t, 10) == d);
  REQUIRE_THROWS_AS(from_tile_major(t, 13), DimensionError);
  REQUIRE(tiles_per_row(8192, 512) == 16);
  REQUIRE(tiles_per_row(10, 4) == 3);
}

TEST_CASE("matrix CSV round trip keeps INF") {
  const auto d = build_distance_matrix(gen_synthetic(9, 0.2, {1, 1000}, 11));
  std::stringstream ss;
  write_matrix_csv(ss, d);
  REQUIRE(ss.str().find("INF") != std::string::npos);
  REQUIRE(read_matrix_csv(ss) == d);
}

TEST_CASE("example graph in the repository parses") {
  const std::filesystem::path p = std::filesystem::path(PIMFW_SOURCE_DIR) / "data" / "tiny.txt";
  if (!std::filesystem::exists(p)) SKIP("no sample graph");
  const auto el = load_edge_list(p, true);
  REQUIRE(el.num_vertices > 0);
}
