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

#include <pimfw/perf_model.hpp>

#include <algorithm>
#include <bit>
#include <set>

namespace pimfw {

std::string to_string(Wide v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

OpCounts& OpCounts::operator+=(const OpCounts& o) {
  row_activations += o.row_activations;
  bits_read += o.bits_read;
  bits_written += o.bits_written;
  bpe_cycles += o.bpe_cycles;
  cpe_cycles += o.cpe_cycles;
  tsv_bits += o.tsv_bits;
  minplus_ops += o.minplus_ops;
  return *this;
}

OpCounts operator*(OpCounts a, Wide k) {
  a.row_activations *= k;
  a.bits_read *= k;
  a.bits_written *= k;
  a.bpe_cycles *= k;
  a.cpe_cycles *= k;
  a.tsv_bits *= k;
  a.minplus_ops *= k;
  return a;
}

namespace {

Wide ceil_div(Wide a, Wide b) { return (a + b - 1) / b; }

void require_width(Index b) {
  if (b < 1) throw DimensionError("tile width must be >= 1");
}

}  // namespace

Index row_pass_count(Index b, const HbmConfig& cfg) {
  require_width(b);
  const Index pes = cfg.bpes_per_bank_group();
  return (b + pes - 1) / pes;
}

CostQuote tile_row_pass_cost(Index b, const HbmConfig& cfg) {
  require_width(b);
  const auto& t = cfg.timing;
  const Wide width = static_cast<Wide>(b);
  const Wide passes = static_cast<Wide>(row_pass_count(b, cfg));
  const Cycles minplus = bpe_minplus_cycles(kOperandBits, cfg.pim.bit_serial_passes);

  // The row is interleaved over every bank of the group regardless of how
  // many BPEs each bank carries.
  const Wide banks = std::min<Wide>(cfg.banks_per_bank_group, width);
  const Wide elems_per_bank = ceil_div(width, banks);
  const Wide rows_per_bank = ceil_div(elems_per_bank * kOperandBits, cfg.row_bits);

  const Cycles open = to_cycles(t.t_rcd, cfg) + (banks - 1) * to_cycles(t.t_rrd, cfg) + to_cycles(t.t_ccdl, cfg);
  const Cycles close = to_cycles(t.t_wr, cfg) + to_cycles(t.t_rc - t.t_ras, cfg);
  const Cycles compute = passes * minplus;

  Cycles cycles = std::max(rows_per_bank * open + compute, rows_per_bank * to_cycles(t.t_ras, cfg));
  cycles += rows_per_bank * close;
  cycles = std::max(cycles, rows_per_bank * to_cycles(t.t_rc, cfg));

  CostQuote q;
  q.cycles = cycles;
  q.counts.row_activations = banks * rows_per_bank;
  // a_ij and the staged multiplier from the row buffer, the pivot vector
  // element from the broadcast register.
  q.counts.bits_read = 3 * kOperandBits * width;
  q.counts.bits_written = kOperandBits * width;
  q.counts.bpe_cycles = width * minplus;
  q.counts.minplus_ops = width;
  return q;
}

CostQuote tile_update_cost(Index b, const HbmConfig& cfg) {
  const CostQuote row = tile_row_pass_cost(b, cfg);
  const Wide row_passes = static_cast<Wide>(b) * static_cast<Wide>(b);
  return {row.cycles * row_passes, row.counts * row_passes};
}

CostQuote pivot_tile_cost(Index b, const HbmConfig& cfg) {
  CostQuote q = tile_update_cost(b, cfg);
  const Cycles beats = ceil_div(static_cast<Wide>(b) * kOperandBits, cfg.dq_bits);
  q.cycles += static_cast<Wide>(b - 1) * beats;
  return q;
}

CostQuote cpe_reduction_cost(std::uint32_t fan_in, const HbmConfig& cfg) {
  if (fan_in < 1) throw ConfigError("CPE reduction needs fan_in >= 1");
  const auto levels = static_cast<std::uint32_t>(std::bit_width(fan_in - 1));  // ceil(log2(fan_in))
  CostQuote q;
  q.cycles = static_cast<Cycles>(cfg.pim.cpe_base_cycles) + static_cast<Cycles>(levels) * cfg.pim.cpe_stage_cycles;
  q.counts.cpe_cycles = q.cycles;
  return q;
}

BroadcastPlan plan_broadcast(BankGroupId src, std::span<const BankGroupId> dst, Index b, const HbmConfig& cfg) {
  require_width(b);
  if (dst.empty()) throw ConfigError("broadcast needs at least one destination");
  const std::uint32_t g = cfg.bank_groups_per_channel;
  const std::uint32_t total = cfg.total_bank_groups();
  if (src >= total) throw IndexError("broadcast source bank-group out of range");

  const ChannelId src_channel = src / g;
  const std::uint32_t landing = src % g;

  // Per destination channel, the groups other than the one the hop lands on.
  std::set<ChannelId> channels;
  std::vector<std::set<std::uint32_t>> fanout(cfg.channels);
  for (const BankGroupId d : dst) {
    if (d >= total) throw IndexError("broadcast destination bank-group out of range");
    channels.insert(d / g);
    if (d % g != landing) fanout[d / g].insert(d % g);
  }

  BroadcastPlan plan;
  for (const ChannelId c : channels)
    if (c != src_channel) ++plan.channel_crossings;
  plan.cross_channel_steps = plan.channel_crossings > 0 ? 1 : 0;
  for (const auto& groups : fanout)
    plan.intra_channel_steps = std::max<std::uint32_t>(plan.intra_channel_steps, groups.size());
  plan.in_group_steps = 1;
  plan.beats_per_step = ceil_div(static_cast<Wide>(b) * kOperandBits, cfg.dq_bits);
  return plan;
}

CostQuote broadcast_cost(BankGroupId src, std::span<const BankGroupId> dst, Index b, const HbmConfig& cfg) {
  const BroadcastPlan plan = plan_broadcast(src, dst, b, cfg);
  CostQuote q;
  q.cycles = static_cast<Cycles>(plan.steps()) * plan.beats_per_step;
  q.counts.tsv_bits = static_cast<Wide>(b) * kOperandBits * plan.channel_crossings;
  return q;
}

EnergyBreakdown energy_of(const OpCounts& c, const EnergyParams& e) {
  const auto w = [](Femtojoules v) { return static_cast<Wide>(v); };
  EnergyBreakdown out;
  out.activation = c.row_activations * w(e.e_activate);
  out.dram_rw = c.bits_read * w(e.e_read_bit) + c.bits_written * w(e.e_write_bit);
  out.bpe = c.bpe_cycles * w(e.e_bpe_cycle);
  out.cpe = c.cpe_cycles * w(e.e_cpe_cycle);
  out.tsv = c.tsv_bits * w(e.e_tsv_bit);
  return out;
}

}  // namespace pimfw
