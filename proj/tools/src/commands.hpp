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

#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace strataflow::cli {

struct SimulateArgs {
  std::optional<std::string> config;
  std::optional<std::string> scenario;
  std::optional<std::string> fractions;
  std::string seeds;
  double scale = 1.0 / 50.0;
  std::uint64_t windows = 10;
  std::optional<std::string> output;
  std::string confidence = "95";
  std::string query = "sum";
  std::optional<std::string> policy;
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> data_seed;
  bool strict_ingest = false;
  unsigned parallel_seeds = 1;
};

struct NodeArgs {
  std::string config;
  std::string role = "node";
  std::uint64_t node_id = 0;
  std::optional<std::string> listen;
  std::optional<std::string> port_file;
  std::optional<std::string> connect;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> data_seed;
  std::uint64_t windows = 0;  ///< 0: until every input has closed
  std::optional<double> fraction;
  std::optional<std::string> policy;
  std::optional<unsigned> workers;
  std::string confidence = "95";
  std::string query = "sum";
};

int cmd_simulate(const SimulateArgs& args);
int cmd_node(const NodeArgs& args);
int cmd_report(const std::string& path);
int cmd_scenario(const std::string& name, double scale);
int cmd_list_scenarios();

}  // namespace strataflow::cli
