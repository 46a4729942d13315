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

#include <condition_variable>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

#include "args.hpp"
#include "commands.hpp"
#include "json.hpp"
#include "strataflow/config.hpp"
#include "strataflow/node_engine.hpp"
#include "strataflow/simnet.hpp"
#include "strataflow/tcp.hpp"
#include "strataflow/transport.hpp"

namespace strataflow::cli {

namespace {

using transport::FrameStream;
using transport::MessageType;

/// What a child session delivered, in arrival order.
struct Message {
  std::size_t child;
  std::variant<IntervalBatch, std::uint64_t, std::monostate> body;  // batch, heartbeat, closed
};

struct Inbox {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<Message> queue;

  void push(Message m) {
    {
      std::lock_guard lock(mu);
      queue.push_back(std::move(m));
    }
    cv.notify_one();
  }

  Message pop() {
    std::unique_lock lock(mu);
    cv.wait(lock, [&] { return !queue.empty(); });
    Message m = std::move(queue.front());
    queue.pop_front();
    return m;
  }
};

void read_session(std::shared_ptr<Inbox> inbox, std::size_t child, transport::Socket socket) {
  FrameStream stream(std::move(socket));
  try {
    while (auto frame = stream.read()) {
      if (frame->type == MessageType::Batch) {
        inbox->push(Message{child, transport::decode_batch_payload(frame->payload)});
      } else {
        inbox->push(Message{child, transport::decode_heartbeat_payload(frame->payload)});
      }
    }
  } catch (const Error& e) {
    std::cerr << "node: session " << child << " closed after protocol error: " << e.what() << "\n";
  }
  inbox->push(Message{child, std::monostate{}});
}

void write_port_file(const std::string& path, std::uint16_t port) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << port << "\n";
  }
  std::filesystem::rename(tmp, path);
}

std::string result_json(const QueryResult& q, std::uint64_t sample_size) {
  nlohmann::ordered_json j;
  j["window"] = q.window_id;
  j["kind"] = std::string(to_string(q.kind));
  j["estimate"] = q.defined ? nlohmann::ordered_json(q.estimate) : nlohmann::ordered_json(nullptr);
  j["variance"] = q.variance;
  j["error_bound"] = q.error_bound;
  j["confidence"] = std::string(to_string(q.confidence));
  j["defined"] = q.defined;
  j["sample_size"] = sample_size;
  return j.dump();
}

int run_feeder(const NodeArgs& args, const sim::TopologyConfig& cfg) {
  if (!args.connect) {
    std::cerr << "node: a feeder needs --connect\n";
    return kExitUsage;
  }
  if (args.windows == 0) {
    std::cerr << "node: a feeder needs --windows\n";
    return kExitUsage;
  }
  const std::uint64_t data_seed = args.data_seed.value_or(args.seed);
  std::vector<sim::SourceFeed> feeds;
  for (const auto& src : cfg.sources)
    if (src.leaf.value == args.node_id) feeds.emplace_back(src, cfg.strata, cfg.interval_length, data_seed);
  if (feeds.empty()) {
    std::cerr << "node: no sources attach to node " << args.node_id << "\n";
    return kExitUsage;
  }

  FrameStream up(transport::connect_to(transport::parse_endpoint(*args.connect)));
  for (std::uint64_t k = 0; k < args.windows; ++k) {
    std::map<SubStreamId, std::vector<Item>> strata;
    for (const auto& feed : feeds)
      for (const Item& item : feed.emit(k).items) strata[item.substream].push_back(item);
    IntervalBatch batch(k, NodeId{0});
    for (auto& [id, items] : strata) {
      const auto n = items.size();
      batch.add_entry(id, MetadataRecord{1.0, n}, std::move(items));
    }
    up.write(transport::encode_batch(batch));
  }
  return kExitOk;
}

int run_engine(const NodeArgs& args, const sim::TopologyConfig& cfg, const sim::Simulation& plan) {
  const NodeId self{args.node_id};
  NodeConfig nc;
  bool found = false;
  for (const auto& n : plan.config().nodes) {
    if (n.id == self) {
      nc = n;
      found = true;
    }
  }
  if (!found) {
    std::cerr << "node: node " << args.node_id << " is not in the config\n";
    return kExitUsage;
  }
  nc.budget = plan.budget(self);
  if (args.policy) nc.policy = parse_policy(*args.policy);
  if (args.workers) nc.workers = *args.workers;
  const QueryKind kind = parse_query_flag(args.query);
  const Confidence level = parse_confidence_flag(args.confidence);

  std::size_t expected = 0;
  for (const auto& e : cfg.edges)
    if (e.parent == self) ++expected;
  for (const auto& s : cfg.sources)
    if (s.leaf == self) {
      ++expected;  // one feeder session for all of this leaf's sources
      break;
    }

  std::optional<transport::Listener> listener;
  if (expected > 0) {
    if (!args.listen) {
      std::cerr << "node: node " << args.node_id << " has inputs and needs --listen\n";
      return kExitUsage;
    }
    listener.emplace(transport::parse_endpoint(*args.listen));
    if (args.port_file) write_port_file(*args.port_file, listener->port());
  }

  std::optional<FrameStream> up;
  if (nc.parent) {
    if (!args.connect) {
      std::cerr << "node: node " << args.node_id << " has a parent and needs --connect\n";
      return kExitUsage;
    }
    up.emplace(transport::connect_to(transport::parse_endpoint(*args.connect)));
  }

  auto inbox = std::make_shared<Inbox>();
  for (std::size_t c = 0; c < expected; ++c) {
    std::thread(read_session, inbox, c, listener->accept()).detach();
  }

  NodeEngine engine(nc, args.seed);
  std::vector<std::optional<std::uint64_t>> done_through(expected);
  std::vector<bool> closed(expected, false);
  std::size_t open = expected;
  std::optional<std::uint64_t> max_seen;

  const auto ready = [&](std::uint64_t k) {
    for (std::size_t c = 0; c < expected; ++c)
      if (!closed[c] && !(done_through[c] && *done_through[c] >= k)) return false;
    return true;
  };
  const auto finished = [&] {
    if (args.windows > 0) return engine.current_interval() >= args.windows;
    return open == 0 && (!max_seen || engine.current_interval() > *max_seen);
  };

  while (!finished()) {
    while (!finished() && ready(engine.current_interval())) {
      IntervalOutput out = engine.close_interval();
      if (auto* batch = std::get_if<OutgoingBatch>(&out)) {
        up->write(transport::encode_batch(batch->batch));
      } else {
        const auto& sample = std::get<RootSample>(out).sample;
        QueryResult q = run_query(sample, kind, level);
        q.window_id = sample.interval_id();
        std::cout << result_json(q, sample.item_count()) << std::endl;
      }
    }
    if (finished()) break;
    if (open == 0) {
      std::cerr << "node: every input closed before window " << engine.current_interval() << "\n";
      return kExitRuntime;
    }
    Message m = inbox->pop();
    if (auto* batch = std::get_if<IntervalBatch>(&m.body)) {
      const auto k = batch->interval_id();
      engine.on_batch(*batch, k);
      done_through[m.child] = std::max(done_through[m.child].value_or(0), k);
      max_seen = std::max(max_seen.value_or(0), k);
    } else if (auto* hb = std::get_if<std::uint64_t>(&m.body)) {
      done_through[m.child] = std::max(done_through[m.child].value_or(0), *hb);
      max_seen = std::max(max_seen.value_or(0), *hb);
    } else {
      closed[m.child] = true;
      --open;
    }
  }
  if (engine.stale_deliveries() > 0) {
    std::cerr << "node: " << engine.stale_items() << " late items dropped\n";
  }
  return kExitOk;
}

}  // namespace

int cmd_node(const NodeArgs& args) {
  try {
    const auto cfg = config::load_topology(args.config);
    if (args.role == "feeder") return run_feeder(args, cfg);
    if (args.role != "node") {
      std::cerr << "node: --role must be node or feeder\n";
      return kExitUsage;
    }
    sim::SimOptions opts;
    opts.seed = args.seed;
    opts.fraction = args.fraction;
    const sim::Simulation plan(cfg, opts);
    return run_engine(args, cfg, plan);
  } catch (const Error& e) {
    std::cerr << "node: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

}  // namespace strataflow::cli
