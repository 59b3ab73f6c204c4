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

#include <pimfw/hbm_config.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <string>

namespace pimfw {

HbmConfig default_config() { return HbmConfig{}; }

void check_config(const HbmConfig& cfg) {
  auto positive = [](std::uint64_t v, const char* name) {
    if (v < 1) throw ConfigError(std::string(name) + " must be >= 1");
  };
  positive(cfg.channels, "channels");
  positive(cfg.bank_groups_per_channel, "bank_groups_per_channel");
  positive(cfg.banks_per_bank_group, "banks_per_bank_group");
  positive(cfg.bpes_per_bank, "bpes_per_bank");
  positive(cfg.dq_bits, "dq_bits");
  positive(cfg.rows_per_bank, "rows_per_bank");
  positive(cfg.stack_height, "stack_height");
  if (cfg.clock_period_ps < 1) throw ConfigError("clock_period_ps must be >= 1");
  if (cfg.row_bits < kOperandBits || cfg.row_bits % kOperandBits != 0)
    throw ConfigError("row_bits must be a positive multiple of " + std::to_string(kOperandBits));

  const auto& t = cfg.timing;
  for (auto v : {t.t_rc, t.t_rcd, t.t_ras, t.t_rrd, t.t_wr, t.t_ccds, t.t_ccdl})
    if (v < 0) throw ConfigError("timing parameters must be non-negative");
  if (t.t_ras > t.t_rc) throw ConfigError("t_ras must not exceed t_rc");
  if (t.t_rcd > t.t_ras) throw ConfigError("t_rcd must not exceed t_ras");

  const auto& e = cfg.energy;
  for (auto v : {e.e_activate, e.e_read_bit, e.e_write_bit, e.e_bpe_cycle, e.e_cpe_cycle, e.e_tsv_bit})
    if (v < 0) throw ConfigError("energy parameters must be non-negative");

  positive(cfg.pim.bit_serial_passes, "bit_serial_passes");
}

void validate_config(const HbmConfig& cfg, Index m) {
  check_config(cfg);
  if (m < 1) throw ConfigError("tile grid must have at least one tile per row");
  const auto groups = static_cast<Index>(cfg.total_bank_groups());
  if (2 * m > groups)
    throw ConstraintViolation("parallelism constraint violated: 2M = " + std::to_string(2 * m) +
                              " exceeds C*G = " + std::to_string(groups) + " bank-groups (M = " +
                              std::to_string(m) + ")");
}

Cycles to_cycles(Picoseconds t, const HbmConfig& cfg) {
  if (t <= 0) return 0;
  return static_cast<Cycles>((t + cfg.clock_period_ps - 1) / cfg.clock_period_ps);
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

// Decimal units -> integer sub-units; refuses values finer than one sub-unit.
std::int64_t scaled(const json& v, double scale, const std::string& key) {
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  const double x = v.get<double>() * scale;
  const double r = std::round(x);
  if (std::abs(x - r) > 1e-6 * std::max(1.0, std::abs(x)))
    throw ConfigError("config key '" + key + "' has more precision than the model resolves");
  return static_cast<std::int64_t>(r);
}

double unscaled(std::int64_t v, double scale) { return static_cast<double>(v) / scale; }

template <typename T>
T integer(const json& v, const std::string& key) {
  if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0))
    throw ConfigError("config key '" + key + "' must be a non-negative integer");
  return v.get<T>();
}

bool boolean(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ConfigError("config key '" + key + "' must be a boolean");
  return v.get<bool>();
}

using Setter = std::function<void(HbmConfig&, const json&, const std::string&)>;

void apply_section(HbmConfig& cfg, const json& obj, const std::map<std::string, Setter>& setters,
                   const std::string& where) {
  if (!obj.is_object()) throw ConfigError("config section '" + where + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key '" + where + key + "'");
    it->second(cfg, value, where + key);
  }
}

}  // namespace

nlohmann::json config_to_json(const HbmConfig& cfg) {
  const auto& t = cfg.timing;
  const auto& e = cfg.energy;
  const auto& p = cfg.pim;
  return json{
      {"channels", cfg.channels},
      {"bank_groups_per_channel", cfg.bank_groups_per_channel},
      {"banks_per_bank_group", cfg.banks_per_bank_group},
      {"bpes_per_bank", cfg.bpes_per_bank},
      {"row_bits", cfg.row_bits},
      {"dq_bits", cfg.dq_bits},
      {"clock_period_ps", cfg.clock_period_ps},
      {"rows_per_bank", cfg.rows_per_bank},
      {"stack_height", cfg.stack_height},
      {"timing",
       {{"t_rc_ns", unscaled(t.t_rc, 1e3)},
        {"t_rcd_ns", unscaled(t.t_rcd, 1e3)},
        {"t_ras_ns", unscaled(t.t_ras, 1e3)},
        {"t_rrd_ns", unscaled(t.t_rrd, 1e3)},
        {"t_wr_ns", unscaled(t.t_wr, 1e3)},
        {"t_ccds_ns", unscaled(t.t_ccds, 1e3)},
        {"t_ccdl_ns", unscaled(t.t_ccdl, 1e3)}}},
      {"energy",
       {{"e_activate_pj", unscaled(e.e_activate, 1e3)},
        {"e_read_bit_pj", unscaled(e.e_read_bit, 1e3)},
        {"e_write_bit_pj", unscaled(e.e_write_bit, 1e3)},
        {"e_bpe_cycle_pj", unscaled(e.e_bpe_cycle, 1e3)},
        {"e_cpe_cycle_pj", unscaled(e.e_cpe_cycle, 1e3)},
        {"e_tsv_bit_pj", unscaled(e.e_tsv_bit, 1e3)}}},
      {"pim",
       {{"bit_serial_passes", p.bit_serial_passes},
        {"cpe_base_cycles", p.cpe_base_cycles},
        {"cpe_stage_cycles", p.cpe_stage_cycles},
        {"overlap_broadcast", p.overlap_broadcast},
        {"cpe_reduction", p.cpe_reduction},
        {"bulk_load_cycles", p.bulk_load_cycles}}},
  };
}

HbmConfig config_from_json(const nlohmann::json& j) {
  using U32 = std::uint32_t;
#define PIMFW_U32(field) \
  {#field, [](HbmConfig& c, const json& v, const std::string& k) { c.field = integer<U32>(v, k); }}
  static const std::map<std::string, Setter> top_setters = {
      PIMFW_U32(channels),
      PIMFW_U32(bank_groups_per_channel),
      PIMFW_U32(banks_per_bank_group),
      PIMFW_U32(bpes_per_bank),
      PIMFW_U32(row_bits),
      PIMFW_U32(dq_bits),
      PIMFW_U32(rows_per_bank),
      PIMFW_U32(stack_height),
      {"clock_period_ps",
       [](HbmConfig& c, const json& v, const std::string& k) { c.clock_period_ps = integer<Picoseconds>(v, k); }},
  };
#undef PIMFW_U32

#define PIMFW_NS(field) \
  {#field "_ns", [](HbmConfig& c, const json& v, const std::string& k) { c.timing.field = scaled(v, 1e3, k); }}
  static const std::map<std::string, Setter> timing_setters = {
      PIMFW_NS(t_rc), PIMFW_NS(t_rcd), PIMFW_NS(t_ras), PIMFW_NS(t_rrd),
      PIMFW_NS(t_wr), PIMFW_NS(t_ccds), PIMFW_NS(t_ccdl),
  };
#undef PIMFW_NS

#define PIMFW_PJ(field) \
  {#field "_pj", [](HbmConfig& c, const json& v, const std::string& k) { c.energy.field = scaled(v, 1e3, k); }}
  static const std::map<std::string, Setter> energy_setters = {
      PIMFW_PJ(e_activate), PIMFW_PJ(e_read_bit), PIMFW_PJ(e_write_bit),
      PIMFW_PJ(e_bpe_cycle), PIMFW_PJ(e_cpe_cycle), PIMFW_PJ(e_tsv_bit),
  };
#undef PIMFW_PJ

  static const std::map<std::string, Setter> pim_setters = {
      {"bit_serial_passes",
       [](HbmConfig& c, const json& v, const std::string& k) { c.pim.bit_serial_passes = integer<U32>(v, k); }},
      {"cpe_base_cycles",
       [](HbmConfig& c, const json& v, const std::string& k) { c.pim.cpe_base_cycles = integer<U32>(v, k); }},
      {"cpe_stage_cycles",
       [](HbmConfig& c, const json& v, const std::string& k) { c.pim.cpe_stage_cycles = integer<U32>(v, k); }},
      {"overlap_broadcast",
       [](HbmConfig& c, const json& v, const std::string& k) { c.pim.overlap_broadcast = boolean(v, k); }},
      {"cpe_reduction",
       [](HbmConfig& c, const json& v, const std::string& k) { c.pim.cpe_reduction = boolean(v, k); }},
      {"bulk_load_cycles",
       [](HbmConfig& c, const json& v, const std::string& k) {
         c.pim.bulk_load_cycles = integer<std::uint64_t>(v, k);
       }},
  };

  if (!j.is_object()) throw ConfigError("config document must be a JSON object");
  HbmConfig cfg = default_config();
  for (const auto& [key, value] : j.items()) {
    if (key == "timing")
      apply_section(cfg, value, timing_setters, "timing.");
    else if (key == "energy")
      apply_section(cfg, value, energy_setters, "energy.");
    else if (key == "pim")
      apply_section(cfg, value, pim_setters, "pim.");
    else if (key == "_comment" || key == "_notes")
      continue;
    else {
      const auto it = top_setters.find(key);
      if (it == top_setters.end()) throw ConfigError("unknown config key '" + key + "'");
      it->second(cfg, value, key);
    }
  }
  check_config(cfg);
  return cfg;
}

HbmConfig load_config(const std::string& spec) {
  if (spec.empty() || spec == "default") return default_config();
  std::ifstream in(spec);
  if (!in) throw ConfigError("cannot open config file '" + spec + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + spec + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

// ---------------------------------------------------------------------------
// Tile mapping
// ---------------------------------------------------------------------------

BankGroupId map_tile_to_bank_group(Index i, Index j, Index m, std::uint32_t c, std::uint32_t g) {
  if (i < 0 || j < 0 || i >= m || j >= m)
    throw IndexError("tile (" + std::to_string(i) + "," + std::to_string(j) + ") outside " + std::to_string(m) +
                     "x" + std::to_string(m) + " grid");
  const auto groups = static_cast<std::uint64_t>(c) * g;
  if (groups == 0) throw ConfigError("mapping needs at least one bank-group");
  return static_cast<BankGroupId>(static_cast<std::uint64_t>(i * m + j) % groups);
}

std::vector<TileCoord> tiles_on_bank_group(BankGroupId bg, Index m, std::uint32_t c, std::uint32_t g) {
  if (bg >= static_cast<std::uint64_t>(c) * g) throw IndexError("bank-group id out of range");
  std::vector<TileCoord> out;
  const auto groups = static_cast<Index>(c) * g;
  // Linear index runs bg, bg + C*G, ... which is row-major order already.
  for (Index linear = bg; linear < m * m; linear += groups) out.push_back({linear / m, linear % m});
  return out;
}

TileMap::TileMap(Index m, std::uint32_t channels, std::uint32_t groups_per_channel)
    : m_(m), c_(channels), g_(groups_per_channel) {
  if (channels < 1 || groups_per_channel < 1) throw ConfigError("mapping needs at least one bank-group");
  assignment_.reserve(static_cast<std::size_t>(m * m));
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) assignment_.push_back(map_tile_to_bank_group(i, j, m, c_, g_));
}

}  // namespace pimfw
