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

#include <pimfw/report.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

namespace pimfw {

using nlohmann::json;

std::string format_sig(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

double project_runtime(double t_measured, double n_measured, double n_target) {
  if (!(t_measured > 0) || !(n_measured > 0) || !(n_target > 0))
    throw ConfigError("projection inputs must all be positive");
  const double scale = n_target / n_measured;
  return t_measured * scale * scale * scale;
}

Comparison compare_to_baseline(double sim_seconds, std::optional<double> sim_joules, const BaselineRecord& base) {
  if (!(base.runtime_seconds > 0)) throw ConfigError("baseline runtime must be positive");
  if (!(sim_seconds > 0)) throw ConfigError("simulated runtime must be positive");
  Comparison c;
  c.speedup = base.runtime_seconds / sim_seconds;
  if (base.energy_joules && sim_joules) {
    if (!(*sim_joules > 0)) throw ConfigError("simulated energy must be positive");
    c.energy_ratio = *base.energy_joules / *sim_joules;
  }
  return c;
}

json comparison_json(const Comparison& c, double sim_seconds, std::optional<double> sim_joules,
                     const BaselineRecord& base) {
  json j{
      {"baseline",
       {{"name", base.name},
        {"source", "user-supplied"},
        {"runtime_seconds", base.runtime_seconds},
        {"energy_joules", base.energy_joules ? json(*base.energy_joules) : json(nullptr)}}},
      {"simulated", {{"runtime_seconds", sim_seconds}, {"energy_joules", sim_joules ? json(*sim_joules) : json(nullptr)}}},
      {"speedup", c.speedup},
      {"speedup_3sf", format_sig(c.speedup, 3)},
  };
  if (c.energy_ratio) {
    j["energy_ratio"] = *c.energy_ratio;
    j["energy_ratio_3sf"] = format_sig(*c.energy_ratio, 3);
  } else {
    j["energy_ratio"] = nullptr;
  }
  return j;
}

// ---------------------------------------------------------------------------

json wide_json(Wide v) {
  if (v <= std::numeric_limits<std::uint64_t>::max()) return json(static_cast<std::uint64_t>(v));
  return json(to_string(v));
}

Wide wide_from_json(const json& j) {
  if (j.is_number_unsigned() || (j.is_number_integer() && j.get<long long>() >= 0))
    return static_cast<Wide>(j.get<std::uint64_t>());
  if (j.is_string()) {
    Wide v = 0;
    const auto s = j.get<std::string>();
    if (s.empty()) throw ConfigError("empty integer string in report");
    for (const char ch : s) {
      if (ch < '0' || ch > '9') throw ConfigError("bad integer string '" + s + "' in report");
      v = v * 10 + static_cast<Wide>(ch - '0');
    }
    return v;
  }
  throw ConfigError("expected a non-negative integer in report");
}

namespace {

json counts_json(const OpCounts& c) {
  return json{
      {"row_activations", wide_json(c.row_activations)},
      {"bits_read", wide_json(c.bits_read)},
      {"bits_written", wide_json(c.bits_written)},
      {"bpe_cycles", wide_json(c.bpe_cycles)},
      {"cpe_cycles", wide_json(c.cpe_cycles)},
      {"tsv_bits", wide_json(c.tsv_bits)},
      {"minplus_ops", wide_json(c.minplus_ops)},
  };
}

double fj_to_joules(Wide fj) { return static_cast<double>(fj) * 1e-15; }

}  // namespace

json run_report(const SimResult& r, const HbmConfig& cfg, const WorkloadInfo& workload) {
  json wl{{"source", workload.source}, {"n", r.n}, {"b", r.b}, {"m", r.m}, {"padded_n", r.padded_n}};
  if (workload.graph_path) wl["graph"] = *workload.graph_path;
  if (workload.density) wl["density"] = *workload.density;
  if (workload.seed) wl["seed"] = *workload.seed;

  const auto& e = r.energy;
  json util = nullptr;
  if (r.timeline_retained) {
    const auto u = utilization_report(r);
    util = json{{"max", u.max}, {"min", u.min}, {"mean", u.mean}, {"bank_groups", u.busy_fraction.size()}};
  }

  return json{
      {"tool", "pimfw"},
      {"version", kToolVersion},
      {"workload", wl},
      {"config", config_to_json(cfg)},
      {"modeled",
       {{"total_cycles", wide_json(r.total_cycles)},
        {"bulk_load_cycles", wide_json(r.bulk_load_cycles)},
        {"event_count", r.event_count},
        {"timeline_retained", r.timeline_retained},
        {"counts", counts_json(r.counts)}}},
      {"calibrated",
       {{"clock_period_ps", cfg.clock_period_ps},
        {"total_time_ps", wide_json(r.total_time_ps)},
        {"total_time_seconds", r.total_time_seconds()},
        {"energy_fj",
         {{"activation", wide_json(e.activation)},
          {"dram_rw", wide_json(e.dram_rw)},
          {"bpe", wide_json(e.bpe)},
          {"cpe", wide_json(e.cpe)},
          {"tsv", wide_json(e.tsv)},
          {"total", wide_json(e.total())}}},
        {"energy_total_joules", fj_to_joules(e.total())},
        {"energy_constants", config_to_json(cfg)["energy"]}}},
      {"utilization", util},
  };
}

RunSummary parse_run_report(const json& j) {
  try {
    RunSummary s;
    const auto& wl = j.at("workload");
    s.n = wl.at("n").get<Index>();
    s.b = wl.at("b").get<Index>();
    s.m = wl.at("m").get<Index>();
    s.total_cycles = wide_from_json(j.at("modeled").at("total_cycles"));
    const auto& cal = j.at("calibrated");
    s.total_time_seconds = cal.at("total_time_seconds").get<double>();
    s.energy_total_fj = wide_from_json(cal.at("energy_fj").at("total"));
    s.energy_total_joules = cal.at("energy_total_joules").get<double>();
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("run report is missing fields: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

VerifyReport run_verify(const VerifySpec& spec) {
  VerifyReport rep;
  for (std::size_t trial = 0; trial < spec.trials; ++trial) {
    const EdgeList edges =
        gen_synthetic(static_cast<std::size_t>(spec.n), spec.density, spec.weights, spec.seed + trial);
    const DistanceMatrix d = build_distance_matrix(edges);
    const DistanceMatrix expected = fw_reference(d);
    const FunctionalResult got = simulate_functional(d, spec.b, spec.config, spec.options, spec.fault);
    ++rep.trials_run;

    for (Index i = 0; i < spec.n && rep.passed; ++i) {
      for (Index j = 0; j < spec.n; ++j) {
        if (expected(i, j) != got.distances(i, j)) {
          rep.passed = false;
          rep.first_mismatch = Mismatch{trial, i, j, expected(i, j), got.distances(i, j)};
          break;
        }
      }
    }
    if (!rep.passed) break;
  }
  return rep;
}

json verify_json(const VerifySpec& spec, const VerifyReport& r) {
  json j{{"n", spec.n},
         {"b", spec.b},
         {"density", spec.density},
         {"seed", spec.seed},
         {"trials_requested", spec.trials},
         {"trials_run", r.trials_run},
         {"passed", r.passed}};
  if (r.first_mismatch) {
    const auto& mm = *r.first_mismatch;
    auto dist = [](Distance d) { return d == kInf ? json("INF") : json(d); };
    j["first_mismatch"] = {{"trial", mm.trial}, {"i", mm.i}, {"j", mm.j}, {"expected", dist(mm.expected)},
                           {"got", dist(mm.got)}};
  }
  return j;
}

// ---------------------------------------------------------------------------

SweepParameter parse_sweep_parameter(const std::string& name) {
  if (name == "channels") return SweepParameter::Channels;
  if (name == "bpes_per_bank") return SweepParameter::BpesPerBank;
  if (name == "bpes_per_bank_group") return SweepParameter::BpesPerBankGroup;
  if (name == "block_size") return SweepParameter::BlockSize;
  if (name == "n") return SweepParameter::N;
  throw ConfigError("unknown sweep parameter '" + name +
                    "' (expected channels, bpes_per_bank, bpes_per_bank_group, block_size or n)");
}

std::string to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::Channels: return "channels";
    case SweepParameter::BpesPerBank: return "bpes_per_bank";
    case SweepParameter::BpesPerBankGroup: return "bpes_per_bank_group";
    case SweepParameter::BlockSize: return "block_size";
    case SweepParameter::N: return "n";
  }
  return "?";
}

namespace {

struct SweepPoint {
  HbmConfig cfg;
  Index n = 0;
  Index b = 0;
};

SweepPoint make_point(const SweepSpec& spec, std::uint64_t v) {
  SweepPoint p{spec.base_config, spec.n, spec.b};
  const auto u32 = [](std::uint64_t x) {
    if (x > std::numeric_limits<std::uint32_t>::max()) throw ConfigError("sweep value out of range");
    return static_cast<std::uint32_t>(x);
  };
  switch (spec.parameter) {
    case SweepParameter::Channels: p.cfg.channels = u32(v); break;
    case SweepParameter::BpesPerBank: p.cfg.bpes_per_bank = u32(v); break;
    case SweepParameter::BpesPerBankGroup:
      if (v % p.cfg.banks_per_bank_group != 0)
        throw ConfigError("bpes_per_bank_group " + std::to_string(v) + " is not a multiple of banks_per_bank_group " +
                          std::to_string(p.cfg.banks_per_bank_group));
      p.cfg.bpes_per_bank = u32(v / p.cfg.banks_per_bank_group);
      break;
    case SweepParameter::BlockSize: p.b = static_cast<Index>(v); break;
    case SweepParameter::N: p.n = static_cast<Index>(v); break;
  }
  if (p.n < 1 || p.b < 1) throw ConfigError("sweep workload needs n >= 1 and b >= 1");
  const Index m = tiles_per_row(p.n, p.b);
  if (spec.options.enforce_parallelism_limit)
    validate_config(p.cfg, m);
  else
    check_config(p.cfg);
  return p;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned jobs) {
  if (spec.values.empty()) throw ConfigError("sweep needs at least one value");
  for (std::size_t i = 1; i < spec.values.size(); ++i)
    if (spec.values[i] <= spec.values[i - 1]) throw ConfigError("sweep values must be strictly increasing");

  std::vector<SweepPoint> points;
  for (const auto v : spec.values) {
    try {
      points.push_back(make_point(spec, v));
    } catch (const ConstraintViolation& e) {
      throw ConstraintViolation(to_string(spec.parameter) + "=" + std::to_string(v) + ": " + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError(to_string(spec.parameter) + "=" + std::to_string(v) + ": " + e.what());
    }
  }

  std::size_t ref = 0;
  if (spec.reference_value) {
    const auto it = std::find(spec.values.begin(), spec.values.end(), *spec.reference_value);
    if (it == spec.values.end()) throw ConfigError("reference value is not one of the sweep values");
    ref = static_cast<std::size_t>(it - spec.values.begin());
  }

  std::vector<SweepRow> rows(points.size());
  auto run_one = [&](std::size_t i) {
    const auto& p = points[i];
    SimOptions opts = spec.options;
    opts.timeline_round_limit = 0;  // counters are enough for a sweep row
    const SimResult r = simulate(p.n, p.b, p.cfg, opts);
    rows[i] = SweepRow{spec.values[i], r.m, r.total_cycles, r.total_time_seconds(), r.energy.total(), 1, 1};
  };

  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(points.size())));
  if (jobs == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < points.size(); i = next++) run_one(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  // Ratios from integer cycles so they do not depend on the clock rounding.
  const double ref_cycles = static_cast<double>(rows[ref].total_cycles);
  for (auto& row : rows) {
    const double c = static_cast<double>(row.total_cycles);
    row.time_ratio = c / ref_cycles;
    row.speedup = ref_cycles / c;
  }
  return rows;
}

namespace {

std::string g12(double v) { return format_sig(v, 12); }

}  // namespace

void write_sweep_csv(std::ostream& out, SweepParameter p, const std::vector<SweepRow>& rows) {
  out << "parameter,value,m,total_cycles,total_time_seconds,energy_total_fj,energy_total_joules,time_ratio,speedup\n";
  for (const auto& r : rows) {
    out << to_string(p) << ',' << r.value << ',' << r.m << ',' << to_string(r.total_cycles) << ','
        << g12(r.total_time_seconds) << ',' << to_string(r.energy_total_fj) << ','
        << g12(static_cast<double>(r.energy_total_fj) * 1e-15) << ',' << g12(r.time_ratio) << ',' << g12(r.speedup)
        << '\n';
  }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::vector<SweepRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 || line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 9) throw ParseError(lineno, "sweep CSV row needs 9 fields");
    try {
      SweepRow r;
      r.value = std::stoull(f[1]);
      r.m = std::stoll(f[2]);
      r.total_cycles = wide_from_json(json(f[3]));
      r.total_time_seconds = std::stod(f[4]);
      r.energy_total_fj = wide_from_json(json(f[5]));
      r.time_ratio = std::stod(f[7]);
      r.speedup = std::stod(f[8]);
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw ParseError(lineno, "malformed sweep CSV row");
    }
  }
  return rows;
}

json sweep_json(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"value", r.value},
                   {"m", r.m},
                   {"total_cycles", wide_json(r.total_cycles)},
                   {"total_time_seconds", r.total_time_seconds},
                   {"energy_total_fj", wide_json(r.energy_total_fj)},
                   {"time_ratio", r.time_ratio},
                   {"speedup", r.speedup}});
  }
  return json{{"tool", "pimfw"},
              {"version", kToolVersion},
              {"parameter", to_string(spec.parameter)},
              {"n", spec.n},
              {"b", spec.b},
              {"base_config", config_to_json(spec.base_config)},
              {"rows", arr}};
}

}  // namespace pimfw
