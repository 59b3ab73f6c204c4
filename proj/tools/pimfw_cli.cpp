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

// pimfw: command-line front end for the blocked Floyd-Warshall PIM simulator.
//
//   pimfw run      simulate one workload and write a JSON (or CSV) report
//   pimfw verify   check the blocked kernel against the naive oracle
//   pimfw sweep    vary one design parameter and tabulate the results
//   pimfw project  cubic runtime projection to another graph size
//   pimfw compare  speedup / energy ratio against a user-supplied baseline

#include <pimfw/report.hpp>

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using nlohmann::json;
using namespace pimfw;

struct Output {
  std::string path;
  std::string format = "json";

  void write(const std::string& text) const {
    if (path.empty() || path == "-") {
      std::cout << text;
      return;
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file '" + path + "'");
    out << text;
  }
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::vector<std::uint64_t> parse_values(const std::string& list) {
  std::vector<std::uint64_t> values;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      values.push_back(v);
    } catch (const std::logic_error&) {
      throw ConfigError("bad sweep value '" + tok + "'");
    }
  }
  return values;
}

// --- run -------------------------------------------------------------------

struct RunArgs {
  std::string graph;
  bool undirected = false;
  Index nodes = 0;
  std::optional<double> density;
  std::uint64_t seed = 1;
  Index block = 0;
  std::string config = "default";
  bool oversubscribe = false;
  std::string dump_matrix;
  Output out;
};

int cmd_run(const RunArgs& a) {
  const HbmConfig cfg = load_config(a.config);
  SimOptions opts;
  opts.enforce_parallelism_limit = !a.oversubscribe;

  WorkloadInfo wl;
  std::optional<DistanceMatrix> input;
  Index n = a.nodes;
  if (!a.graph.empty()) {
    wl.source = "graph";
    wl.graph_path = a.graph;
    input = build_distance_matrix(load_edge_list(a.graph, !a.undirected));
    n = input->rows();
  } else if (a.density) {
    wl.source = "synthetic";
    wl.density = a.density;
    wl.seed = a.seed;
    input = build_distance_matrix(gen_synthetic(static_cast<std::size_t>(n), *a.density, {1, 100}, a.seed));
  }
  if (n < 1) throw ConfigError("run needs --graph PATH or --nodes N");

  SimResult sim;
  if (input && n <= opts.functional_guard) {
    FunctionalResult f = simulate_functional(*input, a.block, cfg, opts);
    sim = std::move(f.sim);
    if (!a.dump_matrix.empty()) {
      std::ofstream mout(a.dump_matrix);
      if (!mout) throw Error("cannot open matrix dump '" + a.dump_matrix + "'");
      write_matrix_csv(mout, f.distances);
    }
  } else {
    sim = simulate(n, a.block, cfg, opts);
  }

  const json report = run_report(sim, cfg, wl);
  if (a.out.format == "csv") {
    std::ostringstream os;
    os << "n,b,m,total_cycles,total_time_seconds,energy_total_fj\n"
       << sim.n << ',' << sim.b << ',' << sim.m << ',' << to_string(sim.total_cycles) << ','
       << format_sig(sim.total_time_seconds(), 12) << ',' << to_string(sim.energy.total()) << '\n';
    a.out.write(os.str());
  } else {
    a.out.write(dump(report));
  }
  return kExitOk;
}

// --- verify ----------------------------------------------------------------

struct VerifyArgs {
  VerifySpec spec;
  std::string config = "default";
  std::optional<std::size_t> fault_op;
  bool oversubscribe = false;
  Output out;
};

int cmd_verify(VerifyArgs a) {
  a.spec.config = load_config(a.config);
  a.spec.options.enforce_parallelism_limit = !a.oversubscribe;
  if (a.fault_op) a.spec.fault = FaultInjection{*a.fault_op};
  const VerifyReport rep = run_verify(a.spec);
  a.out.write(dump(verify_json(a.spec, rep)));
  if (!rep.passed) {
    const auto& mm = *rep.first_mismatch;
    std::cerr << "verification failed in trial " << mm.trial << " at (" << mm.i << "," << mm.j << "): expected "
              << (mm.expected == kInf ? std::string("INF") : std::to_string(mm.expected)) << ", got "
              << (mm.got == kInf ? std::string("INF") : std::to_string(mm.got)) << "\n";
    return kExitVerifyFailed;
  }
  return kExitOk;
}

// --- sweep -----------------------------------------------------------------

struct SweepArgs {
  std::string param;
  std::string values;
  Index nodes = 0;
  Index block = 0;
  std::string config = "default";
  unsigned jobs = 1;
  std::optional<std::uint64_t> ref_value;
  bool oversubscribe = false;
  Output out{"", "csv"};
};

int cmd_sweep(const SweepArgs& a) {
  SweepSpec spec;
  spec.parameter = parse_sweep_parameter(a.param);
  spec.values = parse_values(a.values);
  spec.base_config = load_config(a.config);
  spec.n = a.nodes;
  spec.b = a.block;
  spec.options.enforce_parallelism_limit = !a.oversubscribe;
  spec.reference_value = a.ref_value;
  const auto rows = run_sweep(spec, a.jobs);
  if (a.out.format == "json") {
    a.out.write(dump(sweep_json(spec, rows)));
  } else {
    std::ostringstream os;
    write_sweep_csv(os, spec.parameter, rows);
    a.out.write(os.str());
  }
  return kExitOk;
}

// --- project / compare -----------------------------------------------------

struct ProjectArgs {
  double time = 0;
  double from = 0;
  double to = 0;
  Output out;
};

int cmd_project(const ProjectArgs& a) {
  const double t = project_runtime(a.time, a.from, a.to);
  const json j{{"measured_seconds", a.time},
               {"n_measured", a.from},
               {"n_target", a.to},
               {"projected_seconds", t},
               {"projected_seconds_3sf", format_sig(t, 3)}};
  a.out.write(dump(j));
  return kExitOk;
}

struct CompareArgs {
  std::string report;
  std::optional<double> sim_time;
  std::optional<double> sim_energy;
  BaselineRecord baseline;
  std::optional<double> baseline_runtime;
  Output out;
};

int cmd_compare(CompareArgs a) {
  if (!a.baseline_runtime) throw ConfigError("compare needs --baseline-runtime");
  a.baseline.runtime_seconds = *a.baseline_runtime;
  double seconds = 0;
  std::optional<double> joules = a.sim_energy;
  if (!a.report.empty()) {
    std::ifstream in(a.report);
    if (!in) throw ConfigError("cannot open report '" + a.report + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ConfigError("report '" + a.report + "' is not valid JSON: " + e.what());
    }
    const RunSummary s = parse_run_report(j);
    seconds = s.total_time_seconds;
    if (!joules) joules = s.energy_total_joules;
  } else if (a.sim_time) {
    seconds = *a.sim_time;
  } else {
    throw ConfigError("compare needs --report PATH or --sim-time S");
  }
  const Comparison c = compare_to_baseline(seconds, joules, a.baseline);
  a.out.write(dump(comparison_json(c, seconds, joules, a.baseline)));
  return kExitOk;
}

void add_output(CLI::App* sub, Output& out, bool csv_default) {
  sub->add_option("--out", out.path, "Output path (default stdout)");
  sub->add_option("--format", out.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->default_val(csv_default ? "csv" : "json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cycle-level simulator of blocked Floyd-Warshall on an HBM3 stack with in-bank PEs"};
  app.set_version_flag("--version", std::string("pimfw ") + kToolVersion);
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Simulate one workload");
  run_cmd->add_option("--graph", run.graph, "SNAP-style edge list")->check(CLI::ExistingFile);
  run_cmd->add_flag("--undirected", run.undirected, "Treat the edge list as undirected");
  run_cmd->add_option("--nodes", run.nodes, "Vertex count (timing-only unless --density is given)");
  run_cmd->add_option("--density", run.density, "Generate a synthetic graph with this edge probability");
  run_cmd->add_option("--seed", run.seed, "Synthetic graph seed");
  run_cmd->add_option("--block-size", run.block, "Tile dimension B")->required();
  run_cmd->add_option("--config", run.config, "Config JSON path or 'default'");
  run_cmd->add_flag("--allow-oversubscription", run.oversubscribe, "Schedule grids with 2M > C*G");
  run_cmd->add_option("--dump-matrix", run.dump_matrix, "Write the distance matrix as CSV");
  add_output(run_cmd, run.out, false);

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check blocked FW against the reference oracle");
  verify_cmd->add_option("--nodes", verify.spec.n, "Vertex count")->required();
  verify_cmd->add_option("--block-size", verify.spec.b, "Tile dimension B")->required();
  verify_cmd->add_option("--density", verify.spec.density, "Edge probability");
  verify_cmd->add_option("--seed", verify.spec.seed, "Seed of the first trial");
  verify_cmd->add_option("--trials", verify.spec.trials, "Number of random graphs");
  verify_cmd->add_option("--weight-lo", verify.spec.weights.lo, "Smallest edge weight");
  verify_cmd->add_option("--weight-hi", verify.spec.weights.hi, "Largest edge weight");
  verify_cmd->add_option("--config", verify.config, "Config JSON path or 'default'");
  verify_cmd->add_flag("--allow-oversubscription", verify.oversubscribe, "Schedule grids with 2M > C*G");
  verify_cmd->add_option("--inject-fault", verify.fault_op, "Testing only: corrupt this tile op")
      ->group("");
  add_output(verify_cmd, verify.out, false);

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Vary one design parameter");
  sweep_cmd->add_option("--param", sweep.param, "channels|bpes_per_bank|bpes_per_bank_group|block_size|n")
      ->required();
  sweep_cmd->add_option("--values", sweep.values, "Comma-separated, strictly increasing")->required();
  sweep_cmd->add_option("--nodes", sweep.nodes, "Vertex count N")->required();
  sweep_cmd->add_option("--block-size", sweep.block, "Tile dimension B")->required();
  sweep_cmd->add_option("--config", sweep.config, "Base config JSON path or 'default'");
  sweep_cmd->add_option("--jobs", sweep.jobs, "Worker threads");
  sweep_cmd->add_option("--ref-value", sweep.ref_value, "Normalize ratios to this value (default: first)");
  sweep_cmd->add_flag("--allow-oversubscription", sweep.oversubscribe, "Schedule grids with 2M > C*G");
  add_output(sweep_cmd, sweep.out, true);

  ProjectArgs project;
  auto* project_cmd = app.add_subcommand("project", "Cubic runtime projection");
  project_cmd->add_option("--time", project.time, "Measured runtime in seconds")->required();
  project_cmd->add_option("--n-measured", project.from, "Graph size of the measurement")->required();
  project_cmd->add_option("--n-target", project.to, "Graph size to project to")->required();
  add_output(project_cmd, project.out, false);

  CompareArgs compare;
  auto* compare_cmd = app.add_subcommand("compare", "Speedup against an externally measured baseline");
  compare_cmd->add_option("--report", compare.report, "JSON report written by 'run'");
  compare_cmd->add_option("--sim-time", compare.sim_time, "Simulated runtime in seconds (instead of --report)");
  compare_cmd->add_option("--sim-energy", compare.sim_energy, "Simulated energy in joules");
  compare_cmd->add_option("--baseline-runtime", compare.baseline_runtime, "Baseline runtime in seconds");
  compare_cmd->add_option("--baseline-energy", compare.baseline.energy_joules, "Baseline energy in joules");
  compare_cmd->add_option("--baseline-name", compare.baseline.name, "Baseline label");
  add_output(compare_cmd, compare.out, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*verify_cmd) return cmd_verify(verify);
    if (*sweep_cmd) return cmd_sweep(sweep);
    if (*project_cmd) return cmd_project(project);
    if (*compare_cmd) return cmd_compare(compare);
  } catch (const std::exception& e) {
    std::cerr << "pimfw: error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
