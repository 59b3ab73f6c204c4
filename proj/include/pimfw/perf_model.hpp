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

#include <pimfw/hbm_config.hpp>

#include <span>

namespace pimfw {

// Accounting for the energy categories. Everything is additive.
struct OpCounts {
  Wide row_activations = 0;
  Wide bits_read = 0;
  Wide bits_written = 0;
  Wide bpe_cycles = 0;  // summed over every active BPE
  Wide cpe_cycles = 0;
  Wide tsv_bits = 0;
  Wide minplus_ops = 0;

  OpCounts& operator+=(const OpCounts& o);
  friend OpCounts operator+(OpCounts a, const OpCounts& b) { return a += b; }
  friend OpCounts operator*(OpCounts a, Wide k);
  friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

struct CostQuote {
  Cycles cycles = 0;
  OpCounts counts;

  friend bool operator==(const CostQuote&, const CostQuote&) = default;
};

/// Cycles for one bit-serial min-plus: `passes` sweeps over the operand bits.
constexpr Cycles bpe_minplus_cycles(std::uint32_t operand_bits, std::uint32_t passes = 2) {
  return static_cast<Cycles>(passes) * operand_bits;
}

/// ceil(b / BPEs per bank-group).
Index row_pass_count(Index b, const HbmConfig& cfg);

/// One min-plus sweep over one b-element tile row inside a bank-group.
///
/// The row is spread over the group's banks. Opening it costs tRCD plus a
/// tRRD stagger per additional bank and a tCCDL slice read; each BPE pass then
/// costs one bit-serial min-plus; closing costs tWR plus precharge
/// (tRC - tRAS). The row stays open at least tRAS and re-activation respects
/// tRC. Only the compute term scales with the pass count.
CostQuote tile_row_pass_cost(Index b, const HbmConfig& cfg);

/// One tile_minplus_update: b inner-product steps of b row passes each,
/// serialized on the group.
CostQuote tile_update_cost(Index b, const HbmConfig& cfg);

/// In-tile Floyd-Warshall: b dependent iterations. Each iteration is a full
/// b x b sweep and must wait for the in-group delivery of row/column k.
CostQuote pivot_tile_cost(Index b, const HbmConfig& cfg);

/// Comparison tree at the channel processing engine.
CostQuote cpe_reduction_cost(std::uint32_t fan_in, const HbmConfig& cfg);

struct BroadcastPlan {
  std::uint32_t cross_channel_steps = 0;  // 0 or 1, all channels in parallel
  std::uint32_t intra_channel_steps = 0;  // sequential hops between groups
  std::uint32_t in_group_steps = 0;
  std::uint32_t channel_crossings = 0;  // destination channels reached over TSVs
  Cycles beats_per_step = 0;

  std::uint32_t steps() const { return cross_channel_steps + intra_channel_steps + in_group_steps; }
};

BroadcastPlan plan_broadcast(BankGroupId src, std::span<const BankGroupId> dst, Index b, const HbmConfig& cfg);

/// Cost of broadcasting a single b-element pivot vector.
CostQuote broadcast_cost(BankGroupId src, std::span<const BankGroupId> dst, Index b, const HbmConfig& cfg);

// Femtojoules per category.
struct EnergyBreakdown {
  Wide activation = 0;
  Wide dram_rw = 0;
  Wide bpe = 0;
  Wide cpe = 0;
  Wide tsv = 0;

  Wide total() const { return activation + dram_rw + bpe + cpe + tsv; }
  friend bool operator==(const EnergyBreakdown&, const EnergyBreakdown&) = default;
};

EnergyBreakdown energy_of(const OpCounts& counts, const EnergyParams& e);

}  // namespace pimfw
