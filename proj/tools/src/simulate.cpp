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

#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>
#include <variant>

#include "args.hpp"
#include "commands.hpp"
#include "strataflow/config.hpp"
#include "strataflow/records.hpp"
#include "strataflow/simnet.hpp"

namespace strataflow::cli {

namespace {

struct Task {
  std::optional<double> fraction;
  std::uint64_t seed;
};

std::vector<records::OutputRecord> run_task(const sim::TopologyConfig& cfg, const sim::SimOptions& base, const Task& task,
                                            std::uint64_t windows) {
  sim::SimOptions opts = base;
  opts.seed = task.seed;
  opts.fraction = task.fraction;
  sim::Simulation simulation(cfg, opts);
  const double fraction = simulation.effective_fraction();
  const auto result = simulation.run(windows);
  return records::from_run(cfg.name, fraction, task.seed, result, opts.query);
}

}  // namespace

int cmd_simulate(const SimulateArgs& args) {
  sim::TopologyConfig cfg;
  sim::SimOptions base;
  std::vector<Task> tasks;
  try {
    if (args.config.has_value() == args.scenario.has_value()) {
      std::cerr << "simulate: exactly one of --config or --scenario is required\n";
      return kExitUsage;
    }
    if (args.windows == 0) raise(ErrorCode::InvalidConfig, "--windows must be at least 1");
    cfg = args.config ? config::load_topology(*args.config) : sim::scenario_preset(*args.scenario, args.scale);
    if (args.strict_ingest) {
      for (auto& src : cfg.sources)
        if (auto* replay = std::get_if<ingest::ReplaySpec>(&src.input)) replay->strict = true;
    }
    base.confidence = parse_confidence_flag(args.confidence);
    base.query = parse_query_flag(args.query);
    if (args.policy) base.policy = parse_policy(*args.policy);
    base.workers = args.workers;
    base.data_seed = args.data_seed;

    const auto seeds = args.seeds.empty() ? std::vector<std::uint64_t>{default_seed()} : parse_seeds(args.seeds);
    std::vector<std::optional<double>> fractions;
    if (args.fractions) {
      for (double f : parse_fractions(*args.fractions)) fractions.emplace_back(f);
    } else if (args.scenario) {
      fractions.emplace_back(0.1);
    } else {
      fractions.emplace_back(std::nullopt);  // budgets as configured
    }
    for (const auto& f : fractions)
      for (auto s : seeds) tasks.push_back(Task{f, s});

    // Surface configuration errors before any output is written.
    sim::SimOptions probe = base;
    probe.fraction = tasks.front().fraction;
    sim::Simulation check(cfg, probe);
  } catch (const Error& e) {
    std::cerr << "simulate: " << e.what() << "\n";
    return exit_code_for(e.code());
  }

  std::ofstream file;
  if (args.output) {
    file.open(*args.output, std::ios::trunc);
    if (!file) {
      std::cerr << "simulate: cannot write " << *args.output << "\n";
      return kExitUsage;
    }
  }
  std::ostream& out = args.output ? static_cast<std::ostream&>(file) : std::cout;

  try {
    std::vector<std::vector<records::OutputRecord>> results(tasks.size());
    const unsigned threads = std::max(1u, std::min<unsigned>(args.parallel_seeds, static_cast<unsigned>(tasks.size())));
    if (threads == 1) {
      for (std::size_t i = 0; i < tasks.size(); ++i) {
        for (const auto& r : run_task(cfg, base, tasks[i], args.windows)) out << records::to_jsonl(r) << '\n';
      }
    } else {
      // Seeds are independent; output order stays (fraction, seed).
      std::mutex mu;
      std::size_t next = 0;
      std::exception_ptr failure;
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
          for (;;) {
            std::size_t i;
            {
              std::lock_guard lock(mu);
              if (next >= tasks.size() || failure) return;
              i = next++;
            }
            try {
              results[i] = run_task(cfg, base, tasks[i], args.windows);
            } catch (...) {
              std::lock_guard lock(mu);
              if (!failure) failure = std::current_exception();
            }
          }
        });
      }
      for (auto& th : pool) th.join();
      if (failure) std::rethrow_exception(failure);
      for (const auto& batch : results)
        for (const auto& r : batch) out << records::to_jsonl(r) << '\n';
    }
    out.flush();
  } catch (const Error& e) {
    std::cerr << "simulate: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "report: cannot read " << path << "\n";
    return kExitUsage;
  }
  try {
    std::cout << records::format_table(records::summarize(records::read_records(in)));
  } catch (const Error& e) {
    std::cerr << "report: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

int cmd_scenario(const std::string& name, double scale) {
  try {
    std::cout << config::dump_topology(sim::scenario_preset(name, scale));
  } catch (const Error& e) {
    std::cerr << "scenario: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kExitOk;
}

int cmd_list_scenarios() {
  for (const auto& n : sim::scenario_names()) std::cout << n << "\n";
  return kExitOk;
}

}  // namespace strataflow::cli
