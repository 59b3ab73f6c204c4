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
#include <pimfw/types.hpp>

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace pimfw {

using Picoseconds = std::int64_t;
using Femtojoules = std::int64_t;
using BankGroupId = std::uint32_t;
using ChannelId = std::uint32_t;

// DRAM timing constraints, integer picoseconds.
struct TimingParams {
  Picoseconds t_rc = 30'000;
  Picoseconds t_rcd = 8'000;
  Picoseconds t_ras = 24'000;
  Picoseconds t_rrd = 2'000;
  Picoseconds t_wr = 12'000;
  Picoseconds t_ccds = 2'000;
  Picoseconds t_ccdl = 4'000;

  friend bool operator==(const TimingParams&, const TimingParams&) = default;
};

// Per-event energies in integer femtojoules so totals are exact sums.
// The defaults are placeholders, not measured values.
struct EnergyParams {
  Femtojoules e_activate = 600'000;
  Femtojoules e_read_bit = 400;
  Femtojoules e_write_bit = 450;
  Femtojoules e_bpe_cycle = 50;
  Femtojoules e_cpe_cycle = 2'000;
  Femtojoules e_tsv_bit = 800;

  friend bool operator==(const EnergyParams&, const EnergyParams&) = default;
};

// Modelling knobs for the processing elements and the schedule.
struct PimParams {
  std::uint32_t bit_serial_passes = 2;  // sum pass + compare/select pass
  std::uint32_t cpe_base_cycles = 4;
  std::uint32_t cpe_stage_cycles = 2;
  bool overlap_broadcast = true;  // stream pivot vectors under compute
  bool cpe_reduction = true;
  std::uint64_t bulk_load_cycles = 0;

  friend bool operator==(const PimParams&, const PimParams&) = default;
};

struct HbmConfig {
  std::uint32_t channels = 8;
  std::uint32_t bank_groups_per_channel = 4;
  std::uint32_t banks_per_bank_group = 16;
  std::uint32_t bpes_per_bank = 16;
  std::uint32_t row_bits = 8192;
  std::uint32_t dq_bits = 1024;
  Picoseconds clock_period_ps = 1000;
  // Capacity only; no timing formula uses these.
  std::uint32_t rows_per_bank = 32768;
  std::uint32_t stack_height = 4;

  TimingParams timing;
  EnergyParams energy;
  PimParams pim;

  std::uint32_t total_bank_groups() const { return channels * bank_groups_per_channel; }
  std::uint32_t bpes_per_bank_group() const { return banks_per_bank_group * bpes_per_bank; }

  friend bool operator==(const HbmConfig&, const HbmConfig&) = default;
};

HbmConfig default_config();

// Structural invariants: counts >= 1, whole operands per row, timing order.
void check_config(const HbmConfig& cfg);

/// Full validation for an M x M tile grid. Throws ConstraintViolation when
/// 2M > C*G, since the wavefront stages all 2M pivot row/column tiles at once.
void validate_config(const HbmConfig& cfg, Index m);

// JSON mirror of HbmConfig with units in the key names. Missing keys keep
// their default, unknown keys throw ConfigError.
nlohmann::json config_to_json(const HbmConfig& cfg);
HbmConfig config_from_json(const nlohmann::json& j);
/// `spec` is either a path to a JSON file or the keyword "default".
HbmConfig load_config(const std::string& spec);

BankGroupId map_tile_to_bank_group(Index i, Index j, Index m, std::uint32_t c, std::uint32_t g);
std::vector<TileCoord> tiles_on_bank_group(BankGroupId bg, Index m, std::uint32_t c, std::uint32_t g);

// Static interleaved placement of an M x M tile grid onto C*G bank-groups.
class TileMap {
 public:
  TileMap(Index m, std::uint32_t channels, std::uint32_t groups_per_channel);
  TileMap(Index m, const HbmConfig& cfg) : TileMap(m, cfg.channels, cfg.bank_groups_per_channel) {}

  Index m() const { return m_; }
  std::uint32_t num_bank_groups() const { return c_ * g_; }

  BankGroupId bank_group(Index i, Index j) const { return assignment_[static_cast<std::size_t>(i * m_ + j)]; }
  BankGroupId bank_group(TileCoord t) const { return bank_group(t.i, t.j); }
  ChannelId channel_of(BankGroupId bg) const { return bg / g_; }
  std::uint32_t group_within_channel(BankGroupId bg) const { return bg % g_; }
  std::vector<TileCoord> tiles_on(BankGroupId bg) const { return tiles_on_bank_group(bg, m_, c_, g_); }

 private:
  Index m_;
  std::uint32_t c_;
  std::uint32_t g_;
  std::vector<BankGroupId> assignment_;
};

// ns -> whole cycles, rounded up.
Cycles to_cycles(Picoseconds t, const HbmConfig& cfg);

}  // namespace pimfw
