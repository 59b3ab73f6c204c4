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

#include <pimfw/scheduler.hpp>

#include "json.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pimfw {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit code contract of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitUsage = 2 };

/// `digits` significant figures, fixed or scientific as %g would choose.
std::string format_sig(double value, int digits);

/// O(N^3) extrapolation: t * (n_target / n_measured)^3.
double project_runtime(double t_measured, double n_measured, double n_target);

struct BaselineRecord {
  std::string name = "baseline";
  double runtime_seconds = 0;
  std::optional<double> energy_joules;
};

struct Comparison {
  double speedup = 0;
  std::optional<double> energy_ratio;
};

Comparison compare_to_baseline(double sim_seconds, std::optional<double> sim_joules, const BaselineRecord& base);
nlohmann::json comparison_json(const Comparison& c, double sim_seconds, std::optional<double> sim_joules,
                               const BaselineRecord& base);

// ---------------------------------------------------------------------------
// Run reports
// ---------------------------------------------------------------------------

nlohmann::json wide_json(Wide v);
Wide wide_from_json(const nlohmann::json& j);

struct WorkloadInfo {
  std::string source = "size";  // "size", "synthetic" or "graph"
  std::optional<std::string> graph_path;
  std::optional<double> density;
  std::optional<std::uint64_t> seed;
};

/// Modeled quantities (cycles, counts) are kept apart from calibrated ones
/// (seconds, joules), which carry the constants that produced them.
nlohmann::json run_report(const SimResult& r, const HbmConfig& cfg, const WorkloadInfo& workload);

struct RunSummary {
  Index n = 0;
  Index b = 0;
  Index m = 0;
  Cycles total_cycles = 0;
  double total_time_seconds = 0;
  Wide energy_total_fj = 0;
  double energy_total_joules = 0;
};

RunSummary parse_run_report(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Verification harness
// ---------------------------------------------------------------------------

struct VerifySpec {
  Index n = 64;
  Index b = 16;
  double density = 0.5;
  std::uint64_t seed = 1;
  std::size_t trials = 1;
  WeightRange weights{1, 100};
  HbmConfig config;
  SimOptions options;
  std::optional<FaultInjection> fault;
};

struct Mismatch {
  std::size_t trial = 0;
  Index i = 0;
  Index j = 0;
  Distance expected = 0;
  Distance got = 0;
};

struct VerifyReport {
  std::size_t trials_run = 0;
  bool passed = true;
  std::optional<Mismatch> first_mismatch;
};

/// Per trial: generate a graph (seed + trial), run simulate_functional and
/// compare with fw_reference element by element. Stops at the first mismatch.
VerifyReport run_verify(const VerifySpec& spec);
nlohmann::json verify_json(const VerifySpec& spec, const VerifyReport& r);

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

enum class SweepParameter { Channels, BpesPerBank, BpesPerBankGroup, BlockSize, N };

SweepParameter parse_sweep_parameter(const std::string& name);
std::string to_string(SweepParameter p);

struct SweepSpec {
  SweepParameter parameter = SweepParameter::Channels;
  std::vector<std::uint64_t> values;
  HbmConfig base_config;
  Index n = 0;
  Index b = 0;
  SimOptions options;
  // Row the ratio columns are normalized to; the first row when unset.
  std::optional<std::uint64_t> reference_value;
};

struct SweepRow {
  std::uint64_t value = 0;
  Index m = 0;
  Cycles total_cycles = 0;
  double total_time_seconds = 0;
  Wide energy_total_fj = 0;
  double time_ratio = 1;  // T(value) / T(reference)
  double speedup = 1;     // T(reference) / T(value)

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

/// Rejects the whole sweep if any point is invalid, then runs the points on
/// up to `jobs` threads. Rows come back in spec order.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned jobs = 1);

void write_sweep_csv(std::ostream& out, SweepParameter p, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(std::istream& in);
nlohmann::json sweep_json(const SweepSpec& spec, const std::vector<SweepRow>& rows);

}  // namespace pimfw
