// Copyright 2026 The StrataFlow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>

#include "CLI11.hpp"
#include "args.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace strataflow::cli;

  CLI::App app{"Weighted hierarchical sampling over edge topologies"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "strataflow 0.1.0");

  SimulateArgs sim;
  sim.seeds = "";
  auto* simulate = app.add_subcommand("simulate", "Run WHS, SRS and exact pipelines; write JSONL records");
  simulate->add_option("--config", sim.config, "Topology config file (JSON, version 1)");
  simulate->add_option("--scenario", sim.scenario, "Named preset (see 'scenario --list')");
  simulate->add_option("--fractions", sim.fractions, "Sampling fractions, e.g. 0.1,0.2 or 10,20");
  simulate->add_option("--seeds", sim.seeds, "Seeds, e.g. 1,2,10-20 (default: STRATAFLOW_SEED or 1)");
  simulate->add_option("--scale", sim.scale, "Preset rate multiplier")->capture_default_str();
  simulate->add_option("--windows", sim.windows, "Root windows per run")->capture_default_str();
  simulate->add_option("--output", sim.output, "Output file (default: stdout)");
  simulate->add_option("--confidence", sim.confidence, "68, 95 or 99.7")->capture_default_str();
  simulate->add_option("--query", sim.query, "sum, mean or count")->capture_default_str();
  simulate->add_option("--policy", sim.policy, "equal or proportional");
  simulate->add_option("--workers", sim.workers, "Reservoir shards per node")->check(CLI::PositiveNumber);
  simulate->add_option("--data-seed", sim.data_seed, "Fix the generated data across sampling seeds");
  simulate->add_flag("--strict-ingest", sim.strict_ingest, "Fail on the first malformed replay row");
  simulate->add_option("--parallel-seeds", sim.parallel_seeds, "Worker threads across seeds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  NodeArgs node;
  node.seed = default_seed();
  auto* node_cmd = app.add_subcommand("node", "Run one tree node (or a source feeder) over TCP");
  node_cmd->add_option("--config", node.config, "Topology config file")->required();
  node_cmd->add_option("--node-id", node.node_id, "This node's id (for a feeder: the leaf it feeds)")->required();
  node_cmd->add_option("--role", node.role, "node or feeder")->capture_default_str();
  node_cmd->add_option("--listen", node.listen, "host:port for child sessions (port 0 = ephemeral)");
  node_cmd->add_option("--port-file", node.port_file, "Write the bound port here");
  node_cmd->add_option("--connect", node.connect, "Parent endpoint host:port");
  node_cmd->add_option("--seed", node.seed, "Run seed (default: STRATAFLOW_SEED or 1)");
  node_cmd->add_option("--data-seed", node.data_seed, "Generator seed for a feeder (default: --seed)");
  node_cmd->add_option("--windows", node.windows, "Intervals to process (0 = until inputs close)");
  node_cmd->add_option("--fraction", node.fraction, "Derive budgets from a sampling fraction");
  node_cmd->add_option("--policy", node.policy, "equal or proportional");
  node_cmd->add_option("--workers", node.workers, "Reservoir shards")->check(CLI::PositiveNumber);
  node_cmd->add_option("--confidence", node.confidence, "68, 95 or 99.7")->capture_default_str();
  node_cmd->add_option("--query", node.query, "sum, mean or count")->capture_default_str();

  std::string records_path;
  auto* report = app.add_subcommand("report", "Summarize simulate output");
  report->add_option("records", records_path, "JSONL records file")->required();

  std::string scenario_name;
  double scenario_scale = 1.0 / 50.0;
  bool list = false;
  auto* scenario = app.add_subcommand("scenario", "Print a preset as a config file");
  scenario->add_option("name", scenario_name, "Preset name");
  scenario->add_option("--scale", scenario_scale, "Rate multiplier")->capture_default_str();
  scenario->add_flag("--list", list, "List preset names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (*simulate) return cmd_simulate(sim);
  if (*node_cmd) return cmd_node(node);
  if (*report) return cmd_report(records_path);
  if (list) return cmd_list_scenarios();
  if (scenario_name.empty()) {
    std::cerr << "scenario: a name or --list is required\n";
    return kExitUsage;
  }
  return cmd_scenario(scenario_name, scenario_scale);
}
