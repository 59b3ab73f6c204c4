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

#include <pimfw/fw_core.hpp>
#include <pimfw/graph_io.hpp>
#include <pimfw/hbm_config.hpp>
#include <pimfw/perf_model.hpp>

#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace pimfw {

enum class EventKind : std::uint8_t { PivotFW, Broadcast, RowColUpdate, RemainingUpdate, CpeReduce };
std::string_view to_string(EventKind k);

enum class ResourceKind : std::uint8_t { BankGroup, ChannelPort, ChannelCpe, TsvBus };
std::string_view to_string(ResourceKind k);

struct Resource {
  ResourceKind kind = ResourceKind::BankGroup;
  std::uint32_t id = 0;

  friend bool operator==(const Resource&, const Resource&) = default;
  friend auto operator<=>(const Resource&, const Resource&) = default;
};

// One scheduled interval [start, end) on one resource.
struct PhaseEvent {
  EventKind kind = EventKind::PivotFW;
  Index k = 0;
  Resource resource;
  Cycles start = 0;
  Cycles end = 0;
  OpCounts counts;
  TileCoord tile;  // updated tile, or broadcast source tile

  friend bool operator==(const PhaseEvent&, const PhaseEvent&) = default;
};

struct SimOptions {
  // When false, grids with 2M > C*G are scheduled anyway; the over-subscribed
  // bank-groups simply serialize more tiles.
  bool enforce_parallelism_limit = true;
  // Rounds above this keep aggregate counters only.
  Index timeline_round_limit = 64;
  Index functional_guard = 4096;
};

struct SimResult {
  Index n = 0;
  Index b = 0;
  Index m = 0;
  Index padded_n = 0;
  Cycles total_cycles = 0;
  Wide total_time_ps = 0;
  Cycles bulk_load_cycles = 0;
  OpCounts counts;
  EnergyBreakdown energy;
  std::vector<Cycles> per_bank_group_busy;
  bool timeline_retained = false;
  std::vector<PhaseEvent> timeline;
  std::size_t event_count = 0;

  double total_time_seconds() const;

  friend bool operator==(const SimResult&, const SimResult&) = default;
};

/// Schedules one pivot round starting at `start` on otherwise idle hardware.
/// `round_ops` are the trace records of a single k.
std::vector<PhaseEvent> schedule_round(std::span<const TileOpRecord> round_ops, Index b, const TileMap& map,
                                       const HbmConfig& cfg, Cycles start = 0);
/// Same, for the canonical round k of an m x m grid. Validates the config.
std::vector<PhaseEvent> schedule_round(Index k, Index m, Index b, const TileMap& map, const HbmConfig& cfg,
                                       const SimOptions& opts = {});

/// Timing-only simulation of blocked FW on an n x n matrix with b x b tiles.
SimResult simulate(Index n, Index b, const HbmConfig& cfg, const SimOptions& opts = {});

/// Times an explicit trace (rounds must be contiguous and ascending in k).
SimResult simulate_trace(std::span<const TileOpRecord> trace, Index n, Index b, const HbmConfig& cfg,
                         const SimOptions& opts = {});

struct FunctionalResult {
  DistanceMatrix distances;
  SimResult sim;
};

/// Values from fw_blocked, timing from the same trace.
FunctionalResult simulate_functional(const DistanceMatrix& d, Index b, const HbmConfig& cfg,
                                     const SimOptions& opts = {},
                                     std::optional<FaultInjection> fault = std::nullopt);

struct UtilizationReport {
  std::vector<double> busy_fraction;  // per bank-group
  double max = 0;
  double min = 0;
  double mean = 0;
};

/// Throws UnavailableError when the timeline was elided.
UtilizationReport utilization_report(const SimResult& r);

}  // namespace pimfw
