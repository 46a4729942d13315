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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <queue>
#include <string>
#include <tuple>
#include <utility>

#include "strataflow/error.hpp"
#include "strataflow/reservoir.hpp"
#include "strataflow/simnet.hpp"
#include "topology.hpp"

namespace strataflow::sim {

namespace {

constexpr std::uint64_t kSrsTag = 0x535253;  // "SRS"

enum class EventKind : std::uint8_t { Emit, Deliver, Close };

struct Event {
  SimTime time;
  std::uint64_t node;  // node id, the tie-breaker after time
  std::uint64_t seq;
  EventKind kind;
  std::size_t target;    // source index, or node index for Close
  std::uint64_t interval;

  bool operator>(const Event& o) const {
    return std::tie(time, node, seq) > std::tie(o.time, o.node, o.seq);
  }
};

struct Chunk {
  std::size_t node;
  std::uint64_t arrival_interval;
  std::optional<std::pair<SubStreamId, MetadataRecord>> meta;
  std::vector<Item> items;
};

/// One FIFO link: a constant one-way delay plus a fixed per-item service time.
struct Link {
  SimTime latency = 0;
  double service_ns = 0.0;  // 0 = unlimited capacity
  double free_at = 0.0;
};

double service_time(double capacity) { return capacity > 0.0 ? 1e9 / capacity : 0.0; }

struct WindowTally {
  std::uint64_t count = 0;
  double sum = 0.0;
  std::vector<Item> srs;
};

}  // namespace

struct Simulation::Impl {
  TopologyConfig config;
  SimOptions options;
  detail::TreeIndex tree;

  std::vector<NodeEngine> engines;
  std::vector<SimTime> offsets;
  std::vector<std::uint64_t> budgets;
  std::vector<Link> up_links;      // per node, towards the parent
  std::vector<Link> source_links;  // per source
  std::vector<SourceFeed> feeds;  // per source
  double srs_fraction = 1.0;
  bool ran = false;

  // Run state.
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
  std::uint64_t next_seq = 0;
  std::map<std::uint64_t, Chunk> in_transit;
  std::map<std::uint64_t, WindowTally> tallies;
  std::map<std::pair<SubStreamId, std::uint64_t>, std::uint64_t> truth;
  std::vector<std::uint64_t> sent_below_horizon;
  std::vector<std::uint64_t> source_items_at_leaf;
  std::uint64_t horizon = 0;
  std::uint64_t digest = 0;
  RunMetrics metrics;

  Impl(TopologyConfig cfg, SimOptions opts) : config(std::move(cfg)), options(opts) {
    tree = detail::analyze_tree(config);
    const std::size_t n = config.nodes.size();
    if (options.fraction && !(*options.fraction > 0.0 && *options.fraction <= 1.0)) {
      raise(ErrorCode::InvalidFraction, "sampling fraction must be in (0, 1]");
    }
    load_sources();
    check_unique_paths();

    // Budgets.
    budgets.assign(n, 1);
    std::vector<double> expected(n, 0.0);
    for (std::size_t i : tree.bottom_up) {
      for (std::size_t s : tree.sources[i]) expected[i] += feeds[s].expected_rate();
      for (std::size_t c : tree.children[i]) expected[i] += expected[c];
    }
    for (std::size_t i : tree.bottom_up) {
      if (!options.fraction) {
        budgets[i] = config.nodes[i].budget;
      } else if (tree.children[i].empty()) {
        const double target = std::round(*options.fraction * expected[i]);
        budgets[i] = std::max<std::uint64_t>({1, strata_at(i), static_cast<std::uint64_t>(target)});
      } else {
        std::uint64_t total = 0;
        for (std::size_t c : tree.children[i]) total += budgets[c];
        budgets[i] = total;
      }
    }
    if (options.fraction) {
      srs_fraction = *options.fraction;
    } else if (expected[tree.root] > 0.0) {
      srs_fraction = std::min(1.0, static_cast<double>(budgets[tree.root]) / expected[tree.root]);
    }

    // Clocks.
    const SimTime L = config.interval_length;
    const SimTime guard = options.sync_guard.value_or(L / 4);
    offsets.assign(n, 0);
    for (std::size_t i : tree.bottom_up) {
      SimTime base = 0;
      if (options.align_clocks) {
        if (!tree.children[i].empty()) {
          SimTime latest = 0;
          for (std::size_t c : tree.children[i]) {
            latest = std::max(latest, offsets[c] + config.edges[*tree.parent_edge[c]].latency);
          }
          base = latest + guard;
        } else if (!tree.sources[i].empty()) {
          base = config.sources[tree.sources[i].front()].latency;
          for (std::size_t s : tree.sources[i]) base = std::min(base, config.sources[s].latency);
        }
      }
      offsets[i] = base + config.nodes[i].clock_offset;
    }

    // Engines and links.
    up_links.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      NodeConfig nc = config.nodes[i];
      nc.budget = budgets[i];
      if (options.policy) nc.policy = *options.policy;
      if (options.workers) nc.workers = *options.workers;
      engines.emplace_back(nc, options.seed);
      if (tree.parent_edge[i]) {
        const auto& e = config.edges[*tree.parent_edge[i]];
        up_links[i] = Link{e.latency, service_time(e.capacity), 0.0};
      }
    }
    for (const auto& src : config.sources) {
      source_links.push_back(Link{src.latency, service_time(src.capacity), 0.0});
    }
  }

  void load_sources() {
    const std::uint64_t data_seed = options.data_seed.value_or(options.seed);
    for (const auto& src : config.sources) feeds.emplace_back(src, config.strata, config.interval_length, data_seed);
  }

  std::uint64_t strata_at(std::size_t node) const {
    std::vector<SubStreamId> all;
    for (std::size_t s : tree.sources[node]) {
      auto ids = feeds[s].strata();
      all.insert(all.end(), ids.begin(), ids.end());
    }
    std::sort(all.begin(), all.end());
    return static_cast<std::uint64_t>(std::unique(all.begin(), all.end()) - all.begin());
  }

  void check_unique_paths() const {
    std::map<SubStreamId, NodeId> owner;
    for (std::size_t s = 0; s < config.sources.size(); ++s) {
      const NodeId leaf = config.sources[s].leaf;
      for (SubStreamId id : feeds[s].strata()) {
        auto [it, fresh] = owner.emplace(id, leaf);
        if (!fresh && it->second != leaf) {
          raise(ErrorCode::UniquePathViolation, "stratum " + std::to_string(id.value) + " reaches the root through nodes " +
                                                    std::to_string(it->second.value) + " and " +
                                                    std::to_string(leaf.value));
        }
      }
    }
  }

  std::uint64_t interval_at(std::size_t node, SimTime t) const {
    const SimTime rel = t - offsets[node];
    return rel <= 0 ? 0 : static_cast<std::uint64_t>(rel / config.interval_length);
  }

  void push(SimTime time, std::size_t node, EventKind kind, std::size_t target, std::uint64_t interval) {
    queue.push(Event{time, config.nodes[node].id.value, next_seq++, kind, target, interval});
  }

  void schedule_chunk(SimTime time, Chunk chunk) {
    const std::uint64_t seq = next_seq;
    push(time, chunk.node, EventKind::Deliver, 0, 0);
    in_transit.emplace(seq, std::move(chunk));
  }

  /// Pushes items through a link. `ready(m)` is when item m is handed to the
  /// link; arrivals are grouped into one delivery per receiver interval.
  template <class Ready>
  void transmit(Link& link, std::size_t dst, std::optional<std::pair<SubStreamId, MetadataRecord>> meta,
                std::vector<Item> items, Ready ready) {
    if (meta) {
      const double start = std::max(ready(0), link.free_at);
      const SimTime t = static_cast<SimTime>(std::floor(start)) + link.latency;
      schedule_chunk(t, Chunk{dst, interval_at(dst, t), meta, {}});
    }
    Chunk current{dst, 0, std::nullopt, {}};
    SimTime last = 0;
    for (std::size_t m = 0; m < items.size(); ++m) {
      const double start = std::max(ready(m), link.free_at);
      link.free_at = start + link.service_ns;
      const SimTime t = static_cast<SimTime>(std::floor(link.free_at)) + link.latency;
      const std::uint64_t k = interval_at(dst, t);
      if (!current.items.empty() && k != current.arrival_interval) {
        schedule_chunk(last, std::move(current));
        current = Chunk{dst, 0, std::nullopt, {}};
      }
      current.arrival_interval = k;
      current.items.push_back(items[m]);
      last = t;
    }
    if (!current.items.empty()) schedule_chunk(last, std::move(current));
  }

  void note(std::uint64_t a, std::uint64_t b, std::uint64_t c) { digest = mix64(digest ^ mix64(a ^ mix64(b ^ mix64(c)))); }

  void on_emit(std::size_t s, std::uint64_t k) {
    const SimTime L = config.interval_length;
    const std::size_t leaf = tree.index.at(config.sources[s].leaf);
    auto [items, times, more] = feeds[s].emit(k);
    if (more) push((k + 1) * L, leaf, EventKind::Emit, s, k + 1);
    note(0, s, items.size());
    metrics.generated += items.size();
    for (const Item& item : items) ++truth[{item.substream, k}];
    if (k < horizon) {
      auto& tally = tallies[k];
      for (const Item& item : items) {
        ++tally.count;
        tally.sum += item.value;
      }
      source_items_at_leaf[leaf] += items.size();
      Rng rng(derive_seed(options.seed, {kSrsTag, s, k}));
      auto srs = srs_pass(items, srs_fraction, rng);
      tally.srs.insert(tally.srs.end(), srs.sample.begin(), srs.sample.end());
    }
    transmit(source_links[s], leaf, std::nullopt, std::move(items),
             [&](std::size_t m) { return static_cast<double>(times[m]); });
  }

  void on_deliver(std::uint64_t seq) {
    auto node = in_transit.extract(seq);
    Chunk& chunk = node.mapped();
    note(1, seq, chunk.items.size());
    NodeEngine& engine = engines[chunk.node];
    if (chunk.meta) engine.on_metadata(chunk.meta->first, chunk.meta->second, chunk.arrival_interval);
    if (!chunk.items.empty()) engine.on_items(chunk.items, chunk.arrival_interval);
  }

  /// Returns true once the root has closed the last window.
  bool on_close(std::size_t i, SimTime now, std::vector<WindowReport>& windows) {
    NodeEngine& engine = engines[i];
    const std::uint64_t k = engine.current_interval();
    IntervalOutput out = engine.close_interval();
    note(2, i, engine.last_arrived());
    if (auto* batch = std::get_if<OutgoingBatch>(&out)) {
      const std::uint64_t kept = batch->batch.item_count();
      metrics.dropped_by_sampling += engine.last_arrived() - kept;
      if (k < horizon) sent_below_horizon[i] += kept;
      const std::size_t parent = *tree.parent[i];
      for (const auto& [id, entry] : batch->batch.entries()) {
        transmit(up_links[i], parent, std::make_pair(id, entry.meta), entry.items,
                 [&](std::size_t) { return static_cast<double>(now); });
      }
      push(now + config.interval_length, i, EventKind::Close, i, 0);
      return false;
    }
    IntervalBatch sample = std::move(std::get<RootSample>(out).sample);
    metrics.delivered += sample.item_count();
    metrics.dropped_by_sampling += engine.last_arrived() - sample.item_count();
    if (k < horizon) windows.push_back(report(k, now, std::move(sample)));
    if (k + 1 >= horizon) return true;
    push(now + config.interval_length, i, EventKind::Close, i, 0);
    return false;
  }

  WindowReport report(std::uint64_t k, SimTime now, IntervalBatch sample) {
    WindowTally tally = std::move(tallies[k]);
    tallies.erase(k);
    WindowReport r;
    r.window = k;
    r.close_time = now;
    r.exact.count = tally.count;
    r.exact.sum = tally.sum;
    if (tally.count > 0) r.exact.mean = tally.sum / static_cast<double>(tally.count);

    r.approx = run_query(sample, options.query, options.confidence);
    r.approx.window_id = k;

    IntervalBatch srs_batch(k, config.nodes[tree.root].id);
    const std::uint64_t srs_n = tally.srs.size();
    if (srs_n > 0) {
      srs_batch.add_entry(SubStreamId{0}, MetadataRecord{1.0 / srs_fraction, srs_n}, std::move(tally.srs));
    }
    r.srs = run_query(srs_batch, options.query, options.confidence);
    r.srs.window_id = k;

    const double total = static_cast<double>(tally.count);
    r.forwarded_fraction = total > 0 ? static_cast<double>(sample.item_count()) / total : 0.0;
    r.srs_forwarded_fraction = total > 0 ? static_cast<double>(srs_n) / total : 0.0;

    const double L = static_cast<double>(config.interval_length);
    double delay = 0.0;
    std::uint64_t n = 0;
    for (const auto& [id, entry] : sample.entries()) {
      for (const Item& item : entry.items) {
        delay += static_cast<double>(now) - (static_cast<double>(item.source_interval) + 0.5) * L;
        ++n;
      }
    }
    r.latency_ms = n > 0 ? delay / static_cast<double>(n) / static_cast<double>(kNanosPerMilli) : 0.0;
    r.root_sample = std::move(sample);
    return r;
  }

  double exact_value(const WindowReport& r) const {
    switch (options.query) {
      case QueryKind::Sum: return r.exact.sum;
      case QueryKind::Count: return static_cast<double>(r.exact.count);
      case QueryKind::Mean: return r.exact.mean.value_or(0.0);
    }
    return 0.0;
  }

  RunResult run(std::uint64_t h) {
    if (ran) raise(ErrorCode::InvalidConfig, "a simulation runs once");
    if (h == 0) raise(ErrorCode::InvalidConfig, "horizon must be at least one window");
    ran = true;
    horizon = h;
    const std::size_t n = config.nodes.size();
    sent_below_horizon.assign(n, 0);
    source_items_at_leaf.assign(n, 0);
    const auto wall_start = std::chrono::steady_clock::now();

    for (std::size_t s = 0; s < config.sources.size(); ++s) {
      push(0, tree.index.at(config.sources[s].leaf), EventKind::Emit, s, 0);
    }
    for (std::size_t i = 0; i < n; ++i) push(offsets[i] + config.interval_length, i, EventKind::Close, i, 0);

    RunResult result;
    while (!queue.empty()) {
      const Event ev = queue.top();
      queue.pop();
      note(ev.time, ev.node, ev.seq);
      bool done = false;
      switch (ev.kind) {
        case EventKind::Emit: on_emit(ev.target, ev.interval); break;
        case EventKind::Deliver: on_deliver(ev.seq); break;
        case EventKind::Close: done = on_close(ev.target, ev.time, result.windows); break;
      }
      if (done) break;
    }

    const auto wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    for (const auto& [seq, chunk] : in_transit) metrics.in_flight += chunk.items.size();
    for (const auto& engine : engines) {
      metrics.in_flight += engine.buffered_items();
      metrics.stale_deliveries += engine.stale_deliveries();
    }

    std::vector<std::uint64_t> below = source_items_at_leaf;
    for (std::size_t i : tree.bottom_up)
      if (tree.parent[i]) below[*tree.parent[i]] += below[i];
    for (const auto& edge : config.edges) {
      const std::size_t c = tree.index.at(edge.child);
      EdgeMetrics em;
      em.child = edge.child;
      em.parent = edge.parent;
      em.items_sent = sent_below_horizon[c];
      em.source_items_below = below[c];
      em.forwarded_fraction =
          below[c] > 0 ? static_cast<double>(sent_below_horizon[c]) / static_cast<double>(below[c]) : 0.0;
      metrics.edges.push_back(em);
    }

    double latency = 0.0;
    for (const auto& w : result.windows) {
      metrics.accuracy_loss.push_back(accuracy_loss(w.approx.estimate, exact_value(w)));
      latency += w.latency_ms;
    }
    if (!result.windows.empty()) metrics.mean_latency_ms = latency / static_cast<double>(result.windows.size());
    metrics.items_per_wall_second = wall > 0 ? static_cast<double>(metrics.generated) / wall : 0.0;
    metrics.event_digest = digest;
    result.metrics = std::move(metrics);
    return result;
  }
};

double Simulation::effective_fraction() const noexcept { return impl_->srs_fraction; }

Simulation::Simulation(TopologyConfig config, SimOptions options)
    : impl_(std::make_unique<Impl>(std::move(config), options)) {}
Simulation::~Simulation() = default;
Simulation::Simulation(Simulation&&) noexcept = default;
Simulation& Simulation::operator=(Simulation&&) noexcept = default;

RunResult Simulation::run(std::uint64_t horizon) { return impl_->run(horizon); }
const TopologyConfig& Simulation::config() const noexcept { return impl_->config; }
NodeId Simulation::root() const noexcept { return impl_->config.nodes[impl_->tree.root].id; }
std::size_t Simulation::node_count() const noexcept { return impl_->config.nodes.size(); }

std::size_t Simulation::depth(NodeId node) const {
  auto it = impl_->tree.index.find(node);
  if (it == impl_->tree.index.end()) raise(ErrorCode::UnknownNode, std::to_string(node.value));
  return impl_->tree.depth[it->second];
}

std::uint64_t Simulation::budget(NodeId node) const {
  auto it = impl_->tree.index.find(node);
  if (it == impl_->tree.index.end()) raise(ErrorCode::UnknownNode, std::to_string(node.value));
  return impl_->budgets[it->second];
}

SimTime Simulation::clock_offset(NodeId node) const {
  auto it = impl_->tree.index.find(node);
  if (it == impl_->tree.index.end()) raise(ErrorCode::UnknownNode, std::to_string(node.value));
  return impl_->offsets[it->second];
}

std::uint64_t Simulation::source_count(SubStreamId id, std::uint64_t interval) const {
  auto it = impl_->truth.find({id, interval});
  return it == impl_->truth.end() ? 0 : it->second;
}

}  // namespace strataflow::sim
