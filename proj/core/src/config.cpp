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

#include "strataflow/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "strataflow/error.hpp"

namespace strataflow::config {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& what) { raise(ErrorCode::InvalidConfig, what); }

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) bad(where + ": missing \"" + key + "\"");
  return *it;
}

template <class T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    bad(where + ": \"" + key + "\" has the wrong type");
  }
}

template <class T>
T get(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    bad(where + ": \"" + key + "\" has the wrong type");
  }
}

SimTime millis(double ms, const std::string& where) {
  if (!std::isfinite(ms) || ms < 0) bad(where + ": durations must be finite and non-negative");
  return static_cast<SimTime>(std::llround(ms * static_cast<double>(kNanosPerMilli)));
}

double to_millis(SimTime t) { return static_cast<double>(t) / static_cast<double>(kNanosPerMilli); }

AllocationPolicy parse_policy(const std::string& text, const std::string& where) {
  if (text == "equal") return AllocationPolicy::Equal;
  if (text == "proportional") return AllocationPolicy::ProportionalToArrivals;
  bad(where + ": policy must be \"equal\" or \"proportional\"");
}

const char* policy_name(AllocationPolicy p) { return p == AllocationPolicy::Equal ? "equal" : "proportional"; }

sim::GeneratorSpec parse_generator(const json& g, std::uint64_t substream, const std::string& where) {
  sim::GeneratorSpec spec;
  spec.substream = SubStreamId{substream};
  const auto dist = get<std::string>(g, "distribution", where);
  if (dist == "gaussian") {
    spec.distribution = sim::Gaussian{get<double>(g, "mean", where), get_or<double>(g, "stddev", 0.0, where)};
  } else if (dist == "poisson") {
    spec.distribution = sim::Poisson{get<double>(g, "lambda", where)};
  } else {
    bad(where + ": distribution must be \"gaussian\" or \"poisson\"");
  }
  spec.rate = get<double>(g, "rate", where);
  spec.seed_component = get_or<std::uint64_t>(g, "seed_component", 0, where);
  if (!(spec.rate >= 0) || !std::isfinite(spec.rate)) bad(where + ": rate must be >= 0");
  return spec;
}

ingest::ReplaySpec parse_replay(const json& r, const std::string& base_dir, const std::string& where) {
  ingest::ReplaySpec spec;
  std::filesystem::path p = get<std::string>(r, "path", where);
  if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
  spec.path = p.string();
  const auto column = [&](const char* key) -> std::string {
    const json& v = require(r, key, where);
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_string()) return v.get<std::string>();
    bad(where + ": \"" + key + "\" must be a column name or index");
  };
  spec.key_column = column("key_column");
  spec.value_column = column("value_column");
  if (r.contains("time_column")) spec.time_column = column("time_column");
  const auto delim = get_or<std::string>(r, "delimiter", ",", where);
  if (delim.size() != 1) bad(where + ": delimiter must be one character");
  spec.delimiter = delim[0];
  spec.has_header = get_or<bool>(r, "header", true, where);
  spec.speed = get_or<double>(r, "speed", 1.0, where);
  if (!(spec.speed > 0)) bad(where + ": speed must be positive");
  spec.spread_intervals = get_or<std::uint64_t>(r, "spread_intervals", 1, where);
  if (spec.spread_intervals == 0) bad(where + ": spread_intervals must be >= 1");
  spec.max_strata = get_or<std::size_t>(r, "max_strata", 64, where);
  spec.overflow_substream = get_or<std::uint64_t>(r, "overflow_substream", 0, where);
  spec.strict = get_or<bool>(r, "strict", false, where);
  if (auto it = r.find("key_map"); it != r.end()) {
    if (!it->is_object()) bad(where + ": key_map must be an object");
    for (const auto& [k, v] : it->items()) spec.key_map[k] = v.get<std::uint64_t>();
  }
  return spec;
}

}  // namespace

sim::TopologyConfig parse_topology(std::string_view text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) bad("top level must be an object");
  const auto version = get<int>(doc, "version", "config");
  if (version != kConfigVersion) {
    raise(ErrorCode::InvalidConfig, "unsupported config version " + std::to_string(version));
  }

  sim::TopologyConfig cfg;
  cfg.name = get_or<std::string>(doc, "name", "custom", "config");
  const double interval_ms = get_or<double>(doc, "interval_ms", 1000.0, "config");
  cfg.interval_length = millis(interval_ms, "interval_ms");
  if (cfg.interval_length <= 0) bad("interval_ms must be positive");

  for (const auto& n : require(doc, "nodes", "config")) {
    NodeConfig node;
    const std::string where = "node";
    node.id = NodeId{get<std::uint64_t>(n, "id", where)};
    const std::string w = "node " + std::to_string(node.id.value);
    node.budget = get_or<std::uint64_t>(n, "budget", 1, w);
    node.policy = parse_policy(get_or<std::string>(n, "policy", "equal", w), w);
    node.workers = get_or<unsigned>(n, "workers", 1, w);
    const double off = get_or<double>(n, "clock_offset_ms", 0.0, w);
    if (!std::isfinite(off)) bad(w + ": clock_offset_ms must be finite");
    node.clock_offset = static_cast<SimTime>(std::llround(off * static_cast<double>(kNanosPerMilli)));
    cfg.nodes.push_back(node);
  }
  if (auto it = doc.find("edges"); it != doc.end()) {
    for (const auto& e : *it) {
      sim::EdgeSpec edge;
      edge.child = NodeId{get<std::uint64_t>(e, "child", "edge")};
      edge.parent = NodeId{get<std::uint64_t>(e, "parent", "edge")};
      edge.latency = millis(get_or<double>(e, "latency_ms", 0.0, "edge"), "edge");
      edge.capacity = get_or<double>(e, "capacity", 0.0, "edge");
      if (!(edge.capacity >= 0)) bad("edge: capacity must be >= 0");
      cfg.edges.push_back(edge);
    }
  }
  for (const auto& s : require(doc, "sources", "config")) {
    const std::string where = "source";
    sim::SourceSpec src;
    src.leaf = NodeId{get<std::uint64_t>(s, "leaf", where)};
    src.latency = millis(get_or<double>(s, "latency_ms", 0.0, where), where);
    src.capacity = get_or<double>(s, "capacity", 0.0, where);
    if (!(src.capacity >= 0)) bad("source: capacity must be >= 0");
    const bool has_gen = s.contains("generator");
    const bool has_replay = s.contains("replay");
    if (has_gen == has_replay) bad("source: exactly one of \"generator\" or \"replay\" is required");
    if (has_gen) {
      src.input = parse_generator(s.at("generator"), get<std::uint64_t>(s, "substream", where), where);
    } else {
      src.input = parse_replay(s.at("replay"), base_dir, where);
    }
    cfg.sources.push_back(std::move(src));
  }
  if (auto it = doc.find("strata"); it != doc.end()) {
    for (const auto& m : *it) {
      cfg.strata.merge(get<std::uint64_t>(m, "substream", "strata"),
                       SubStreamId{get<std::uint64_t>(m, "merge_into", "strata")});
    }
  }
  return cfg;
}

sim::TopologyConfig load_topology(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::Io, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_topology(buf.str(), dir.empty() ? std::string(".") : dir.string());
}

std::string dump_topology(const sim::TopologyConfig& cfg) {
  json doc;
  doc["version"] = kConfigVersion;
  doc["name"] = cfg.name;
  doc["interval_ms"] = to_millis(cfg.interval_length);
  doc["nodes"] = json::array();
  for (const auto& n : cfg.nodes) {
    json j;
    j["id"] = n.id.value;
    j["budget"] = n.budget;
    j["policy"] = policy_name(n.policy);
    j["workers"] = n.workers;
    j["clock_offset_ms"] = to_millis(n.clock_offset);
    doc["nodes"].push_back(j);
  }
  doc["edges"] = json::array();
  for (const auto& e : cfg.edges) {
    doc["edges"].push_back(
        json{{"child", e.child.value}, {"parent", e.parent.value}, {"latency_ms", to_millis(e.latency)}, {"capacity", e.capacity}});
  }
  doc["sources"] = json::array();
  for (const auto& s : cfg.sources) {
    json j;
    j["leaf"] = s.leaf.value;
    j["latency_ms"] = to_millis(s.latency);
    j["capacity"] = s.capacity;
    if (const auto* g = std::get_if<sim::GeneratorSpec>(&s.input)) {
      j["substream"] = g->substream.value;
      json gen;
      if (const auto* d = std::get_if<sim::Gaussian>(&g->distribution)) {
        gen["distribution"] = "gaussian";
        gen["mean"] = d->mean;
        gen["stddev"] = d->stddev;
      } else {
        gen["distribution"] = "poisson";
        gen["lambda"] = std::get<sim::Poisson>(g->distribution).lambda;
      }
      gen["rate"] = g->rate;
      gen["seed_component"] = g->seed_component;
      j["generator"] = gen;
    } else {
      const auto& r = std::get<ingest::ReplaySpec>(s.input);
      json rep;
      rep["path"] = r.path;
      rep["key_column"] = r.key_column;
      rep["value_column"] = r.value_column;
      if (r.time_column) rep["time_column"] = *r.time_column;
      rep["delimiter"] = std::string(1, r.delimiter);
      rep["header"] = r.has_header;
      rep["speed"] = r.speed;
      rep["spread_intervals"] = r.spread_intervals;
      rep["max_strata"] = r.max_strata;
      if (!r.key_map.empty()) rep["key_map"] = r.key_map;
      if (r.overflow_substream != 0) rep["overflow_substream"] = r.overflow_substream;
      rep["strict"] = r.strict;
      j["replay"] = rep;
    }
    doc["sources"].push_back(j);
  }
  if (!cfg.strata.empty()) {
    doc["strata"] = json::array();
    for (const auto& [from, to] : cfg.strata.table()) doc["strata"].push_back(json{{"substream", from}, {"merge_into", to.value}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace strataflow::config
