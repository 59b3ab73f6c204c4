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

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>

namespace pimfw {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view s) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto start = s.find_first_not_of(" \t", pos);
    if (start == std::string_view::npos) break;
    auto end = s.find_first_of(" \t", start);
    if (end == std::string_view::npos) end = s.size();
    fields.push_back(s.substr(start, end - start));
    pos = end;
  }
  return fields;
}

// Returns false on anything that is not a complete base-10 integer.
bool parse_int(std::string_view tok, long long& out, bool& overflow) {
  overflow = false;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec == std::errc::result_out_of_range) {
    overflow = true;
    return ptr == last;
  }
  return ec == std::errc() && ptr == last && first != last;
}

}  // namespace

EdgeList parse_edge_list(std::istream& in, bool directed) {
  std::unordered_map<long long, std::uint32_t> ids;
  std::map<std::pair<std::uint32_t, std::uint32_t>, Distance> best;

  auto vertex = [&](long long raw) {
    auto [it, inserted] = ids.try_emplace(raw, static_cast<std::uint32_t>(ids.size()));
    return it->second;
  };
  auto add = [&](std::uint32_t u, std::uint32_t v, Distance w) {
    if (u == v) return;
    auto [it, inserted] = best.try_emplace({u, v}, w);
    if (!inserted) it->second = std::min(it->second, w);
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = split_fields(body);
    if (fields.size() < 2) throw ParseError(lineno, "expected \"u v [w]\", got fewer than 2 fields");
    if (fields.size() > 3) throw ParseError(lineno, "expected \"u v [w]\", got more than 3 fields");

    long long raw[2];
    for (int f = 0; f < 2; ++f) {
      bool overflow = false;
      if (!parse_int(fields[f], raw[f], overflow) || overflow)
        throw ParseError(lineno, "non-integer vertex identifier '" + std::string(fields[f]) + "'");
    }

    Distance w = 1;
    if (fields.size() == 3) {
      long long wv = 0;
      bool overflow = false;
      if (!parse_int(fields[2], wv, overflow))
        throw ParseError(lineno, "non-integer weight '" + std::string(fields[2]) + "'");
      if (overflow || wv >= static_cast<long long>(kInf))
        throw RangeError("line " + std::to_string(lineno) + ": weight " + std::string(fields[2]) +
                         " is not below the INF sentinel");
      if (wv < 0)
        throw RangeError("line " + std::to_string(lineno) + ": negative weight " + std::string(fields[2]));
      w = static_cast<Distance>(wv);
    }

    const auto u = vertex(raw[0]);
    const auto v = vertex(raw[1]);
    add(u, v, w);
    if (!directed) add(v, u, w);
  }

  EdgeList out;
  out.num_vertices = ids.size();
  out.edges.reserve(best.size());
  for (const auto& [key, w] : best) out.edges.push_back({key.first, key.second, w});
  return out;
}

EdgeList parse_edge_list(std::string_view text, bool directed) {
  std::istringstream in{std::string(text)};
  return parse_edge_list(in, directed);
}

EdgeList load_edge_list(const std::filesystem::path& path, bool directed) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open edge list '" + path.string() + "'");
  return parse_edge_list(in, directed);
}

DistanceMatrix build_distance_matrix(const EdgeList& e) {
  const auto n = static_cast<Index>(e.num_vertices);
  DistanceMatrix d = unreachable_matrix(n);
  for (const auto& edge : e.edges) {
    if (edge.src >= e.num_vertices || edge.dst >= e.num_vertices)
      throw IndexError("edge endpoint out of range");
    if (edge.weight == kInf) throw RangeError("edge weight equals the INF sentinel");
    if (edge.src == edge.dst) continue;
    auto& slot = d(edge.src, edge.dst);
    slot = std::min(slot, edge.weight);
  }
  return d;
}

EdgeList gen_synthetic(std::size_t n, double density, WeightRange weights, std::uint64_t seed) {
  if (!(density > 0.0 && density <= 1.0))
    throw ConfigError("density must lie in (0, 1], got " + std::to_string(density));
  if (weights.lo < 1 || weights.lo > weights.hi || weights.hi == kInf)
    throw ConfigError("weight range must satisfy 1 <= lo <= hi < INF");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<Distance> weight(weights.lo, weights.hi);

  EdgeList out;
  out.num_vertices = n;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u == v) continue;
      // Draw the weight unconditionally so the stream position only depends
      // on (u, v).
      const bool keep = coin(rng) < density;
      const Distance w = weight(rng);
      if (keep) out.edges.push_back({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v), w});
    }
  }
  return out;
}

bool operator==(const TiledMatrix& a, const TiledMatrix& b) {
  if (a.n != b.n || a.b != b.b || a.m != b.m || a.tiles.size() != b.tiles.size()) return false;
  for (std::size_t t = 0; t < a.tiles.size(); ++t)
    if (a.tiles[t] != b.tiles[t]) return false;
  return true;
}

Index tiles_per_row(Index n, Index b) {
  if (b < 1) throw DimensionError("tile dimension must be >= 1");
  return n == 0 ? 0 : (n + b - 1) / b;
}

TiledMatrix to_tile_major(const DistanceMatrix& d, Index b) {
  if (d.rows() != d.cols()) throw DimensionError("distance matrix must be square");
  TiledMatrix t;
  t.b = b;
  t.m = tiles_per_row(d.rows(), b);
  t.n = t.m * b;
  t.tiles.reserve(static_cast<std::size_t>(t.m * t.m));

  const Index n = d.rows();
  for (Index i = 0; i < t.m; ++i) {
    for (Index j = 0; j < t.m; ++j) {
      Tile tile = Tile::Constant(b, b, kInf);
      for (Index r = 0; r < b; ++r) {
        const Index gr = i * b + r;
        for (Index c = 0; c < b; ++c) {
          const Index gc = j * b + c;
          if (gr < n && gc < n)
            tile(r, c) = d(gr, gc);
          else if (gr == gc)
            tile(r, c) = 0;
        }
      }
      t.tiles.push_back(std::move(tile));
    }
  }
  return t;
}

DistanceMatrix from_tile_major(const TiledMatrix& t, Index original_n) {
  if (original_n > t.n)
    throw DimensionError("original_n " + std::to_string(original_n) + " exceeds tiled dimension " +
                         std::to_string(t.n));
  DistanceMatrix d(original_n, original_n);
  for (Index i = 0; i < t.m; ++i) {
    for (Index j = 0; j < t.m; ++j) {
      const Index r0 = i * t.b;
      const Index c0 = j * t.b;
      if (r0 >= original_n || c0 >= original_n) continue;
      const Index rows = std::min(t.b, original_n - r0);
      const Index cols = std::min(t.b, original_n - c0);
      d.block(r0, c0, rows, cols) = t.tile(i, j).topLeftCorner(rows, cols);
    }
  }
  return d;
}

void write_matrix_csv(std::ostream& out, const DistanceMatrix& d) {
  for (Index r = 0; r < d.rows(); ++r) {
    for (Index c = 0; c < d.cols(); ++c) {
      if (c) out << ',';
      if (d(r, c) == kInf)
        out << "INF";
      else
        out << d(r, c);
    }
    out << '\n';
  }
}

DistanceMatrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<Distance>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty()) continue;
    std::vector<Distance> row;
    std::size_t pos = 0;
    while (pos <= body.size()) {
      auto end = body.find(',', pos);
      if (end == std::string_view::npos) end = body.size();
      const auto tok = trim(body.substr(pos, end - pos));
      if (tok == "INF") {
        row.push_back(kInf);
      } else {
        long long v = 0;
        bool overflow = false;
        if (!parse_int(tok, v, overflow) || overflow || v < 0 || v >= static_cast<long long>(kInf))
          throw ParseError(lineno, "bad matrix entry '" + std::string(tok) + "'");
        row.push_back(static_cast<Distance>(v));
      }
      pos = end + 1;
    }
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Index>(rows.size());
  DistanceMatrix d(n, n);
  for (Index r = 0; r < n; ++r) {
    if (static_cast<Index>(rows[r].size()) != n) throw DimensionError("matrix CSV is not square");
    for (Index c = 0; c < n; ++c) d(r, c) = rows[r][c];
  }
  return d;
}

}  // namespace pimfw
