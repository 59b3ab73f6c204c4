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

namespace pimfw {

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::PivotFW: return "PivotFW";
    case Phase::PivotRow: return "PivotRow";
    case Phase::PivotCol: return "PivotCol";
    case Phase::Remaining: return "Remaining";
  }
  return "?";
}

Tile tile_fw(const Tile& a_kk) {
  if (a_kk.rows() != a_kk.cols()) throw DimensionError("pivot tile must be square");
  Tile out = a_kk;
  tile_fw_inplace(out);
  return out;
}

Tile tile_minplus_update(const Tile& a_ij, const Tile& a_ik, const Tile& a_kj) {
  if (a_ik.rows() != a_ij.rows() || a_kj.cols() != a_ij.cols() || a_ik.cols() != a_kj.rows())
    throw DimensionError("tile_minplus_update operand shapes disagree");
  Tile out = a_ij;
  tile_minplus_update_inplace(out, a_ik, a_kj);
  return out;
}

DistanceMatrix fw_reference(const DistanceMatrix& d) {
  if (d.rows() != d.cols()) throw DimensionError("distance matrix must be square");
  DistanceMatrix out = d;
  const Index n = out.rows();
  for (Index k = 0; k < n; ++k)
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) out(i, j) = min_plus(out(i, j), out(i, k), out(k, j));
  return out;
}

namespace {

TileOpRecord make_record(Phase phase, Index k, TileCoord target, std::initializer_list<TileCoord> sources) {
  TileOpRecord rec;
  rec.phase = phase;
  rec.k = k;
  rec.target = target;
  for (const auto& s : sources) rec.source_storage[rec.num_sources++] = s;
  return rec;
}

// The mutated kernel: max where the real one takes min.
void faulty_update(Tile& a_ij, const Tile& a_ik, const Tile& a_kj) {
  for (Index t = 0; t < a_ik.cols(); ++t)
    for (Index r = 0; r < a_ij.rows(); ++r)
      for (Index c = 0; c < a_ij.cols(); ++c)
        a_ij(r, c) = std::max(a_ij(r, c), saturating_add(a_ik(r, t), a_kj(t, c)));
}

}  // namespace

void append_round_trace(Index k, Index m, std::vector<TileOpRecord>& out) {
  out.push_back(make_record(Phase::PivotFW, k, {k, k}, {{k, k}}));
  for (Index j = 0; j < m; ++j)
    if (j != k) out.push_back(make_record(Phase::PivotRow, k, {k, j}, {{k, k}, {k, j}}));
  for (Index i = 0; i < m; ++i)
    if (i != k) out.push_back(make_record(Phase::PivotCol, k, {i, k}, {{i, k}, {k, k}}));
  for (Index i = 0; i < m; ++i) {
    if (i == k) continue;
    for (Index j = 0; j < m; ++j)
      if (j != k) out.push_back(make_record(Phase::Remaining, k, {i, j}, {{i, k}, {k, j}}));
  }
}

std::vector<TileOpRecord> blocked_trace(Index m) {
  std::vector<TileOpRecord> trace;
  trace.reserve(expected_trace_length(static_cast<std::size_t>(m)));
  for (Index k = 0; k < m; ++k) append_round_trace(k, m, trace);
  return trace;
}

BlockedResult fw_blocked(TiledMatrix t, std::optional<FaultInjection> fault) {
  BlockedResult result;
  result.trace = blocked_trace(t.m);

  for (std::size_t op = 0; op < result.trace.size(); ++op) {
    const auto& rec = result.trace[op];
    const bool faulty = fault && fault->op_index == op;
    Tile& target = t.tile(rec.target.i, rec.target.j);

    if (rec.phase == Phase::PivotFW) {
      if (faulty) {
        // A pivot closure has no min to flip without the reduction form.
        const Tile copy = target;
        faulty_update(target, copy, copy);
      } else {
        tile_fw_inplace(target);
      }
      continue;
    }

    // Phase-2 ops read their own target as an operand; take a copy so the
    // product uses the tile as it was at the start of the op.
    const auto src = rec.sources();
    const Tile lhs = t.tile(src[0].i, src[0].j);
    const Tile rhs = t.tile(src[1].i, src[1].j);
    if (faulty)
      faulty_update(target, lhs, rhs);
    else
      tile_minplus_update_inplace(target, lhs, rhs);
  }

  result.matrix = std::move(t);
  return result;
}

}  // namespace pimfw
