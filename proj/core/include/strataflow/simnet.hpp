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
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "strataflow/ingest.hpp"
#include "strataflow/node_engine.hpp"
#include "strataflow/query.hpp"
#include "strataflow/rng.hpp"
#include "strataflow/stream_model.hpp"

namespace strataflow::sim {

struct Gaussian {
  double mean = 0.0;
  double stddev = 1.0;
};

struct Poisson {
  double lambda = 1.0;
};

using Distribution = std::variant<Gaussian, Poisson>;

struct GeneratorSpec {
  SubStreamId substream;
  Distribution distribution = Gaussian{};
  /// Items per interval. Fractional rates emit floor((k+1)r) - floor(kr)
  /// items in interval k.
  double rate = 0.0;
  std::uint64_t seed_component = 0;
};

/// Number of items a source with `rate` emits in `interval`.
std::uint64_t items_in_interval(double rate, std::uint64_t interval) noexcept;

/// Deterministic per (data seed, seed component, substream, interval).
/// InvalidConfig for negative rates, negative σ or non-positive λ.
std::vector<Item> generate(const GeneratorSpec& spec, std::uint64_t interval, std::uint64_t data_seed);

struct EdgeSpec {
  NodeId child;
  NodeId parent;
  SimTime latency = 0;    ///< one-way
  double capacity = 0.0;  ///< items per simulated second; 0 = unlimited
};

struct SourceSpec {
  std::variant<GeneratorSpec, ingest::ReplaySpec> input;
  NodeId leaf;
  SimTime latency = 0;
  double capacity = 0.0;
};

/// One source's output, interval by interval, exactly as the simulator emits
/// it: items carry their stratum (after the merge table) and emission times.
class SourceFeed {
 public:
  struct Emission {
    std::vector<Item> items;
    std::vector<SimTime> times;
    bool more = true;  ///< false once a replay has nothing left after this interval
  };

  /// Loads replay files eagerly. InvalidConfig for bad generator parameters.
  SourceFeed(const SourceSpec& spec, const StratumMap& strata, SimTime interval_length, std::uint64_t data_seed);

  Emission emit(std::uint64_t interval) const;
  /// Distinct strata this source can produce.
  std::vector<SubStreamId> strata() const;
  /// Mean items per interval.
  double expected_rate() const;

 private:
  std::variant<GeneratorSpec, std::vector<ingest::TimedItem>> input_;
  SubStreamId stratum_{};
  SimTime interval_length_;
  std::uint64_t data_seed_;
};

/// The logical tree: nodes, the edges between them, and the sources feeding
/// its leaves.
struct TopologyConfig {
  std::string name = "custom";
  SimTime interval_length = kNanosPerSecond;
  std::vector<NodeConfig> nodes;
  std::vector<EdgeSpec> edges;
  std::vector<SourceSpec> sources;
  StratumMap strata;
};

struct ExactResult {
  std::uint64_t count = 0;
  double sum = 0.0;
  std::optional<double> mean;  ///< empty for an empty window
};

/// Full aggregation without sampling.
ExactResult exact_oracle(std::span<const Item> items);

struct SimOptions {
  std::uint64_t seed = 1;                  ///< sampling randomness
  std::optional<std::uint64_t> data_seed;  ///< generator randomness; defaults to seed
  /// When set, budgets derive from the sampling fraction: source-attached
  /// nodes get round(f × expected arrivals), interior nodes the sum of their
  /// children's budgets.
  std::optional<double> fraction;
  std::optional<AllocationPolicy> policy;
  std::optional<unsigned> workers;
  QueryKind query = QueryKind::Sum;
  Confidence confidence = Confidence::P95;
  /// Offsets every node's clock so that a child's interval-k output lands in
  /// the parent's interval k (synchronized model). Per-node clock_offset is
  /// added on top, which is how misalignment is induced.
  bool align_clocks = true;
  /// Extra slack between a child's close and the parent's boundary when
  /// aligning; defaults to a quarter interval.
  std::optional<SimTime> sync_guard;
};

struct WindowReport {
  std::uint64_t window = 0;
  QueryResult approx;
  QueryResult srs;
  ExactResult exact;
  IntervalBatch root_sample;
  double forwarded_fraction = 0.0;      ///< root-sample items / source items
  double srs_forwarded_fraction = 0.0;
  double latency_ms = 0.0;  ///< mean source-to-root delay of root-sample items
  SimTime close_time = 0;
};

struct EdgeMetrics {
  NodeId child;
  NodeId parent;
  std::uint64_t items_sent = 0;
  std::uint64_t source_items_below = 0;
  double forwarded_fraction = 0.0;
};

struct RunMetrics {
  std::vector<double> accuracy_loss;  ///< per window, |approx - exact| / |exact|
  std::vector<EdgeMetrics> edges;
  double mean_latency_ms = 0.0;
  double items_per_wall_second = 0.0;  ///< informational only
  std::uint64_t stale_deliveries = 0;
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;  ///< items in root samples
  std::uint64_t dropped_by_sampling = 0;
  std::uint64_t in_flight = 0;  ///< on links or buffered in open intervals
  std::uint64_t event_digest = 0;
};

struct RunResult {
  std::vector<WindowReport> windows;
  RunMetrics metrics;
};

/// accuracy loss; 0 when both are 0.
double accuracy_loss(double approx, double exact) noexcept;

class Simulation {
 public:
  /// Validates the topology and instantiates nodes, links and RNG streams.
  /// CycleDetected, MultipleRoots, NoRoot, UnknownNode, OrphanSource,
  /// UniquePathViolation, InvalidConfig.
  Simulation(TopologyConfig config, SimOptions options = {});
  ~Simulation();
  Simulation(Simulation&&) noexcept;
  Simulation& operator=(Simulation&&) noexcept;

  /// Runs until the root has closed `horizon` windows. Callable once.
  RunResult run(std::uint64_t horizon);

  const TopologyConfig& config() const noexcept;
  NodeId root() const noexcept;
  std::size_t node_count() const noexcept;
  /// Number of edges from this node up to the root.
  std::size_t depth(NodeId node) const;
  std::uint64_t budget(NodeId node) const;
  SimTime clock_offset(NodeId node) const;
  /// Sampling fraction used by the SRS baseline: the configured fraction, or
  /// root budget over expected arrivals when budgets come from the config.
  double effective_fraction() const noexcept;
  /// Items generated for a stratum in one source interval (ground truth).
  std::uint64_t source_count(SubStreamId id, std::uint64_t interval) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

inline Simulation build_topology(TopologyConfig config, SimOptions options = {}) {
  return Simulation(std::move(config), options);
}

/// Reference presets: 8 sources → 4 edge nodes → 2 edge nodes → root,
/// one-way latencies 10/20/40 ms, 1 Gbps links. `scale` multiplies the
/// reference arrival rates (default 1/50 keeps runs quick). Names: gaussian, poisson,
/// setting1, setting2, setting3 (and -poisson variants), uniform, skew.
/// UnknownScenario otherwise.
TopologyConfig scenario_preset(std::string_view name, double scale = 1.0 / 50.0);
std::vector<std::string> scenario_names();

}  // namespace strataflow::sim
