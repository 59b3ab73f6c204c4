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

#include <algorithm>
#include <map>
#include <set>

namespace pimfw {

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::PivotFW: return "PivotFW";
    case EventKind::Broadcast: return "Broadcast";
    case EventKind::RowColUpdate: return "RowColUpdate";
    case EventKind::RemainingUpdate: return "RemainingUpdate";
    case EventKind::CpeReduce: return "CpeReduce";
  }
  return "?";
}

std::string_view to_string(ResourceKind k) {
  switch (k) {
    case ResourceKind::BankGroup: return "bank_group";
    case ResourceKind::ChannelPort: return "channel_port";
    case ResourceKind::ChannelCpe: return "channel_cpe";
    case ResourceKind::TsvBus: return "tsv_bus";
  }
  return "?";
}

double SimResult::total_time_seconds() const { return static_cast<double>(total_time_ps) * 1e-12; }

namespace {

// Resource state carried across rounds plus the per-size cost quotes, which
// are identical for every tile of a run.
class RoundScheduler {
 public:
  RoundScheduler(Index b, const TileMap& map, const HbmConfig& cfg)
      : b_(b),
        map_(map),
        cfg_(cfg),
        update_(tile_update_cost(b, cfg)),
        pivot_(pivot_tile_cost(b, cfg)),
        bg_free_(map.num_bank_groups(), 0),
        port_free_(cfg.channels, 0),
        cpe_free_(cfg.channels, 0) {}

  // Emits the events of one round through `sink` and returns the round end.
  template <typename Sink>
  Cycles run(std::span<const TileOpRecord> ops, Cycles start, Sink&& sink) {
    Cycles round_end = start;
    auto emit = [&](EventKind kind, Index k, Resource res, Cycles s, Cycles dur, const OpCounts& counts,
                    TileCoord tile) {
      PhaseEvent ev{kind, k, res, s, s + dur, counts, tile};
      round_end = std::max(round_end, ev.end);
      sink(ev);
      return ev.end;
    };

    std::vector<const TileOpRecord*> phase2;
    std::vector<const TileOpRecord*> phase3;
    const TileOpRecord* pivot = nullptr;
    for (const auto& op : ops) {
      switch (op.phase) {
        case Phase::PivotFW: pivot = &op; break;
        case Phase::PivotRow:
        case Phase::PivotCol: phase2.push_back(&op); break;
        case Phase::Remaining: phase3.push_back(&op); break;
      }
    }
    if (!pivot) throw Error("round trace has no pivot op");
    const Index k = pivot->k;

    // Phase 1.
    const BankGroupId pivot_bg = map_.bank_group(pivot->target);
    Cycles& pivot_free = bg_free_[pivot_bg];
    pivot_free = emit(EventKind::PivotFW, k, {ResourceKind::BankGroup, pivot_bg}, std::max(start, pivot_free),
                      pivot_.cycles, pivot_.counts, pivot->target);
    if (phase2.empty()) return round_end;

    // Pivot broadcast to every pivot row/column holder.
    std::vector<BankGroupId> dst;
    for (const auto* op : phase2) dst.push_back(map_.bank_group(op->target));
    const Delivery pivot_bcast = broadcast(k, pivot->target, pivot_bg, dst, pivot_free, emit);

    // Phase 2, serialized per bank-group.
    ChannelActivity active;
    for (const auto* op : phase2) {
      const BankGroupId bg = map_.bank_group(op->target);
      bg_free_[bg] = emit(EventKind::RowColUpdate, k, {ResourceKind::BankGroup, bg},
                          std::max(pivot_bcast.end, bg_free_[bg]), update_cycles(pivot_bcast.vector_cycles),
                          update_.counts, op->target);
      note(active, bg);
    }
    reduce(k, active, emit);
    const Cycles phase2_end = round_end;

    // Each phase-2 tile feeds one column (pivot row tiles) or one row (pivot
    // column tiles) of the wavefront.
    const Index m = map_.m();
    std::map<TileCoord, Delivery> ready;
    for (const auto* op : phase2) {
      std::vector<BankGroupId> consumers;
      for (Index x = 0; x < m; ++x) {
        if (x == k) continue;
        consumers.push_back(op->phase == Phase::PivotRow ? map_.bank_group(x, op->target.j)
                                                         : map_.bank_group(op->target.i, x));
      }
      if (consumers.empty()) continue;
      ready[op->target] = broadcast(k, op->target, map_.bank_group(op->target), consumers, phase2_end, emit);
    }

    // Phase 3 wavefront.
    active.clear();
    for (const auto* op : phase3) {
      const auto src = op->sources();
      const Delivery& lhs = ready.at(src[0]);
      const Delivery& rhs = ready.at(src[1]);
      const BankGroupId bg = map_.bank_group(op->target);
      bg_free_[bg] = emit(EventKind::RemainingUpdate, k, {ResourceKind::BankGroup, bg},
                          std::max({lhs.end, rhs.end, bg_free_[bg]}),
                          update_cycles(std::max(lhs.vector_cycles, rhs.vector_cycles)), update_.counts, op->target);
      note(active, bg);
    }
    reduce(k, active, emit);
    return round_end;
  }

 private:
  struct Delivery {
    Cycles end = 0;
    Cycles vector_cycles = 0;
  };

  // Latest finish and distinct busy groups per channel within one phase.
  using ChannelActivity = std::map<ChannelId, std::pair<Cycles, std::set<BankGroupId>>>;

  void note(ChannelActivity& active, BankGroupId bg) const {
    auto& slot = active[map_.channel_of(bg)];
    slot.first = std::max(slot.first, bg_free_[bg]);
    slot.second.insert(bg);
  }

  // Streams b pivot vectors. With overlap only the first vector is exposed;
  // the rest arrive under the previous inner-product step.
  template <typename Emit>
  Delivery broadcast(Index k, TileCoord tile, BankGroupId src, const std::vector<BankGroupId>& dst, Cycles ready,
                     Emit& emit) {
    const CostQuote vec = broadcast_cost(src, dst, b_, cfg_);
    const ChannelId ch = map_.channel_of(src);
    const Cycles dur = cfg_.pim.overlap_broadcast ? vec.cycles : vec.cycles * static_cast<Wide>(b_);
    port_free_[ch] = emit(EventKind::Broadcast, k, {ResourceKind::ChannelPort, ch}, std::max(ready, port_free_[ch]),
                          dur, vec.counts * static_cast<Wide>(b_), tile);
    return {port_free_[ch], vec.cycles};
  }

  // With overlap, a tile update cannot outrun the vectors it consumes.
  Cycles update_cycles(Cycles vector_cycles) const {
    if (!cfg_.pim.overlap_broadcast) return update_.cycles;
    return std::max(update_.cycles, vector_cycles * static_cast<Wide>(b_ - 1));
  }

  template <typename Emit>
  void reduce(Index k, const ChannelActivity& active, Emit& emit) {
    if (!cfg_.pim.cpe_reduction) return;
    for (const auto& [ch, slot] : active) {
      const CostQuote q = cpe_reduction_cost(static_cast<std::uint32_t>(slot.second.size()), cfg_);
      cpe_free_[ch] = emit(EventKind::CpeReduce, k, {ResourceKind::ChannelCpe, ch}, std::max(slot.first, cpe_free_[ch]),
                           q.cycles, q.counts, TileCoord{});
    }
  }

  Index b_;
  const TileMap& map_;
  const HbmConfig& cfg_;
  CostQuote update_;
  CostQuote pivot_;
  std::vector<Cycles> bg_free_;
  std::vector<Cycles> port_free_;
  std::vector<Cycles> cpe_free_;
};

void check_trace_geometry(Index n, Index b, Index m, const HbmConfig& cfg, const SimOptions& opts) {
  if (b < 1) throw DimensionError("tile dimension must be >= 1");
  if (n < 1) throw DimensionError("matrix dimension must be >= 1");
  if (opts.enforce_parallelism_limit)
    validate_config(cfg, m);
  else
    check_config(cfg);
}

// Shared driver: `next_round` fills the ops of round k.
template <typename NextRound>
SimResult run_simulation(Index n, Index b, Index m, const HbmConfig& cfg, const SimOptions& opts,
                         NextRound&& next_round) {
  const TileMap map(m, cfg);
  RoundScheduler sched(b, map, cfg);

  SimResult r;
  r.n = n;
  r.b = b;
  r.m = m;
  r.padded_n = m * b;
  r.bulk_load_cycles = cfg.pim.bulk_load_cycles;
  r.per_bank_group_busy.assign(map.num_bank_groups(), 0);
  r.timeline_retained = m <= opts.timeline_round_limit;

  auto sink = [&](const PhaseEvent& ev) {
    r.counts += ev.counts;
    r.total_cycles = std::max(r.total_cycles, ev.end);
    if (ev.resource.kind == ResourceKind::BankGroup) r.per_bank_group_busy[ev.resource.id] += ev.end - ev.start;
    ++r.event_count;
    if (r.timeline_retained) r.timeline.push_back(ev);
  };

  Cycles clock = r.bulk_load_cycles;
  r.total_cycles = clock;
  std::vector<TileOpRecord> ops;
  for (Index k = 0; k < m; ++k) {
    ops.clear();
    next_round(k, ops);
    clock = sched.run(ops, clock, sink);
  }

  r.energy = energy_of(r.counts, cfg.energy);
  r.total_time_ps = r.total_cycles * static_cast<Wide>(cfg.clock_period_ps);
  return r;
}

}  // namespace

std::vector<PhaseEvent> schedule_round(std::span<const TileOpRecord> round_ops, Index b, const TileMap& map,
                                       const HbmConfig& cfg, Cycles start) {
  RoundScheduler sched(b, map, cfg);
  std::vector<PhaseEvent> events;
  sched.run(round_ops, start, [&](const PhaseEvent& ev) { events.push_back(ev); });
  return events;
}

std::vector<PhaseEvent> schedule_round(Index k, Index m, Index b, const TileMap& map, const HbmConfig& cfg,
                                       const SimOptions& opts) {
  if (k < 0 || k >= m) throw IndexError("pivot index out of range");
  check_trace_geometry(m * b, b, m, cfg, opts);
  std::vector<TileOpRecord> ops;
  append_round_trace(k, m, ops);
  return schedule_round(ops, b, map, cfg, 0);
}

SimResult simulate(Index n, Index b, const HbmConfig& cfg, const SimOptions& opts) {
  const Index m = tiles_per_row(n, b);
  check_trace_geometry(n, b, m, cfg, opts);
  return run_simulation(n, b, m, cfg, opts,
                        [m](Index k, std::vector<TileOpRecord>& ops) { append_round_trace(k, m, ops); });
}

SimResult simulate_trace(std::span<const TileOpRecord> trace, Index n, Index b, const HbmConfig& cfg,
                         const SimOptions& opts) {
  const Index m = tiles_per_row(n, b);
  check_trace_geometry(n, b, m, cfg, opts);
  std::size_t pos = 0;
  SimResult r = run_simulation(n, b, m, cfg, opts, [&](Index k, std::vector<TileOpRecord>& ops) {
    while (pos < trace.size() && trace[pos].k == k) ops.push_back(trace[pos++]);
    if (ops.empty()) throw Error("trace is missing round " + std::to_string(k));
  });
  if (pos != trace.size()) throw Error("trace has records beyond the last round");
  return r;
}

FunctionalResult simulate_functional(const DistanceMatrix& d, Index b, const HbmConfig& cfg, const SimOptions& opts,
                                     std::optional<FaultInjection> fault) {
  const Index n = d.rows();
  if (n > opts.functional_guard)
    throw GuardError("functional simulation refused: n = " + std::to_string(n) + " exceeds the guard of " +
                     std::to_string(opts.functional_guard) + "; use timing-only simulate instead");
  const Index m = tiles_per_row(n, b);
  check_trace_geometry(n, b, m, cfg, opts);

  BlockedResult blocked = fw_blocked(to_tile_major(d, b), fault);
  FunctionalResult out;
  out.sim = simulate_trace(blocked.trace, n, b, cfg, opts);
  out.distances = from_tile_major(blocked.matrix, n);
  return out;
}

UtilizationReport utilization_report(const SimResult& r) {
  if (!r.timeline_retained) throw UnavailableError("utilization report needs the timeline, which was elided");
  std::vector<Cycles> busy(r.per_bank_group_busy.size(), 0);
  for (const auto& ev : r.timeline)
    if (ev.resource.kind == ResourceKind::BankGroup) busy[ev.resource.id] += ev.end - ev.start;

  UtilizationReport u;
  const double total = static_cast<double>(r.total_cycles);
  for (const Cycles c : busy) u.busy_fraction.push_back(total > 0 ? static_cast<double>(c) / total : 0.0);
  if (!u.busy_fraction.empty()) {
    const auto [lo, hi] = std::minmax_element(u.busy_fraction.begin(), u.busy_fraction.end());
    u.min = *lo;
    u.max = *hi;
    double sum = 0;
    for (const double f : u.busy_fraction) sum += f;
    u.mean = sum / static_cast<double>(u.busy_fraction.size());
  }
  return u;
}

}  // namespace pimfw
