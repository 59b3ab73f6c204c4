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

#include <pimfw/scheduler.hpp>

#include "catch_amalgamated.hpp"

#include <map>
#include <set>

using namespace pimfw;

namespace {

bool updates(EventKind k) {
  return k == EventKind::PivotFW || k == EventKind::RowColUpdate || k == EventKind::RemainingUpdate;
}

void require_no_overlap(const std::vector<PhaseEvent>& events) {
  std::map<Resource, std::vector<std::pair<Cycles, Cycles>>> by_resource;
  for (const auto& e : events) {
    REQUIRE(e.start <= e.end);
    by_resource[e.resource].push_back({e.start, e.end});
  }
  for (auto& [res, spans] : by_resource) {
    std::sort(spans.begin(), spans.end());
    for (std::size_t i = 1; i < spans.size(); ++i) REQUIRE(spans[i - 1].second <= spans[i].first);
  }
}

}  // namespace

// Worked by hand for two tiles per row, b = 4, default constants:
// pivot 1603, pivot broadcast 3 steps x 1 beat, row/col update 1600,
// CPE over two groups 6, two row/col broadcasts of 2 steps, last update
// 1600, CPE over one group 4.
TEST_CASE("two-by-two grid, frozen round length") {
  const auto r = simulate(8, 4, default_config());
  REQUIRE(r.m == 2);
  REQUIRE(r.total_cycles == 2 * 4820);
  REQUIRE(r.event_count == 18);
  REQUIRE(r.timeline.front().kind == EventKind::PivotFW);
  REQUIRE(r.timeline.front().end == 1603);
  REQUIRE(r.total_time_ps == Wide{9640} * 1000);
  REQUIRE(r.total_time_seconds() == Catch::Approx(9.64e-6));
}

TEST_CASE("single tile is a single pivot") {
  const auto r = simulate(4, 4, default_config());
  REQUIRE(r.total_cycles == pivot_tile_cost(4, default_config()).cycles);
}

TEST_CASE("round ordering respects dependencies and resources") {
  const auto cfg = default_config();
  for (Index m : {3, 5, 8}) {
    const TileMap map(m, cfg);
    for (Index k = 0; k < m; k += 2) {
      const auto events = schedule_round(k, m, 8, map, cfg);
      require_no_overlap(events);
      Cycles pivot_end = 0;
      std::map<TileCoord, Cycles> delivered;
      for (const auto& e : events) {
        if (e.kind == EventKind::PivotFW) {
          REQUIRE(e.tile == TileCoord{k, k});
          REQUIRE(e.resource.id == map.bank_group(k, k));
          pivot_end = e.end;
        }
        if (e.kind == EventKind::Broadcast) {
          REQUIRE(e.start >= pivot_end);
          delivered[e.tile] = e.end;
        }
      }
      for (const auto& e : events) {
        if (e.kind == EventKind::RowColUpdate) REQUIRE(e.start >= delivered.at({k, k}));
        if (e.kind == EventKind::RemainingUpdate) {
          REQUIRE(e.resource.id == map.bank_group(e.tile));
          REQUIRE(e.start >= delivered.at({e.tile.i, k}));
          REQUIRE(e.start >= delivered.at({k, e.tile.j}));
        }
      }
    }
  }
}

TEST_CASE("rounds are separated by barriers") {
  const auto r = simulate(64, 8, default_config());
  Cycles round_end = 0;
  Index current = 0;
  Cycles max_end = 0;
  for (const auto& e : r.timeline) {
    if (e.k != current) {
      REQUIRE(e.k == current + 1);
      round_end = max_end;
      current = e.k;
    }
    REQUIRE(e.start >= round_end);
    max_end = std::max(max_end, e.end);
  }
  REQUIRE(max_end == r.total_cycles);
  require_no_overlap(r.timeline);
}

TEST_CASE("timing-only, trace-driven and functional runs agree") {
  const auto cfg = default_config();
  const auto d = build_distance_matrix(gen_synthetic(40, 0.4, {1, 50}, 3));
  const auto a = simulate(40, 8, cfg);
  const auto b = simulate_trace(blocked_trace(5), 40, 8, cfg);
  const auto f = simulate_functional(d, 8, cfg);
  REQUIRE(a == b);
  REQUIRE(a == f.sim);
  REQUIRE(f.distances == fw_reference(d));
  REQUIRE(a.padded_n == 40);
}

TEST_CASE("work conservation: min-plus ops are M^3 B^3") {
  for (auto [n, b] : {std::pair<Index, Index>{64, 16}, {256, 64}, {8192, 512}}) {
    const auto r = simulate(n, b, default_config());
    const Wide m = static_cast<Wide>(n / b);
    const Wide bb = static_cast<Wide>(b);
    REQUIRE(r.counts.minplus_ops == m * bb * bb * bb * (1 + 2 * (m - 1) + (m - 1) * (m - 1)));
    Wide from_timeline = 0;
    for (const auto& e : r.timeline) from_timeline += e.counts.minplus_ops;
    REQUIRE(from_timeline == r.counts.minplus_ops);
  }
}

TEST_CASE("parallelism limit and oversubscription") {
  const auto cfg = default_config();
  REQUIRE_THROWS_AS(simulate(17 * 8, 8, cfg), ConstraintViolation);
  SimOptions loose;
  loose.enforce_parallelism_limit = false;
  const auto r = simulate(17 * 8, 8, cfg, loose);
  REQUIRE(r.m == 17);
  REQUIRE(r.total_cycles > 0);
  // 289 tiles over 32 groups: the busiest group holds ten
  const TileMap map(17, cfg);
  std::size_t most = 0;
  for (std::uint32_t bg = 0; bg < 32; ++bg) most = std::max(most, map.tiles_on(bg).size());
  REQUIRE(most == 10);
}

// With M = C*G/2 every pivot-column tile (i, k) maps to k or k + M, so the
// column half of the row/column phase runs on two groups only.
TEST_CASE("column tiles collide when M is half the group count") {
  const auto cfg = default_config();
  const TileMap map(16, cfg);
  for (Index k = 0; k < 16; ++k) {
    std::set<BankGroupId> groups;
    for (Index i = 0; i < 16; ++i) groups.insert(map.bank_group(i, k));
    REQUIRE(groups.size() == 2);
  }
}

TEST_CASE("bulk load offsets everything") {
  auto cfg = default_config();
  const auto base = simulate(64, 16, cfg);
  cfg.pim.bulk_load_cycles = 12345;
  const auto loaded = simulate(64, 16, cfg);
  REQUIRE(loaded.total_cycles == base.total_cycles + 12345);
  REQUIRE(loaded.bulk_load_cycles == 12345);
}

TEST_CASE("broadcast overlap only helps") {
  auto cfg = default_config();
  const auto on = simulate(512, 64, cfg);
  cfg.pim.overlap_broadcast = false;
  const auto off = simulate(512, 64, cfg);
  REQUIRE(off.total_cycles > on.total_cycles);
  REQUIRE(off.counts == on.counts);
}

TEST_CASE("BPE saturation is exact end to end") {
  auto cfg = default_config();
  cfg.banks_per_bank_group = 16;
  cfg.bpes_per_bank = 16;  // 256 per group
  const auto at_b = simulate(2048, 256, cfg);
  cfg.bpes_per_bank = 32;
  REQUIRE(simulate(2048, 256, cfg).total_cycles == at_b.total_cycles);
}

TEST_CASE("utilization with an evenly divided grid") {
  const auto cfg = default_config();
  const auto r = simulate(16 * 32, 32, cfg);
  const TileMap map(16, cfg);
  std::vector<std::size_t> update_events(32);
  for (const auto& e : r.timeline)
    if (updates(e.kind)) ++update_events[e.resource.id];
  for (std::uint32_t bg = 0; bg < 32; ++bg) {
    REQUIRE(map.tiles_on(bg).size() == 8);
    REQUIRE(update_events[bg] == 8 * 16);
  }
  const auto u = utilization_report(r);
  REQUIRE(u.busy_fraction.size() == 32);
  REQUIRE(u.max <= 1.0);
  REQUIRE(u.min > 0.0);
  REQUIRE(u.max - u.min < 0.01);
}

TEST_CASE("large grids keep counters but drop the timeline") {
  SimOptions opts;
  opts.enforce_parallelism_limit = false;
  const auto r = simulate(65 * 2, 2, default_config(), opts);
  REQUIRE_FALSE(r.timeline_retained);
  REQUIRE(r.timeline.empty());
  REQUIRE(r.event_count > 0);
  REQUIRE_THROWS_AS(utilization_report(r), UnavailableError);
}

TEST_CASE("functional guard") {
  SimOptions opts;
  opts.functional_guard = 16;
  const DistanceMatrix d = unreachable_matrix(32);
  REQUIRE_THROWS_AS(simulate_functional(d, 8, default_config(), opts), GuardError);
}

TEST_CASE("determinism") {
  const auto a = simulate(8192, 512, default_config());
  const auto b = simulate(8192, 512, default_config());
  REQUIRE(a == b);
}
