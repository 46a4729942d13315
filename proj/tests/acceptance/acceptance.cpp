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

// End-to-end acceptance checks. Each check prints exactly one PASS/FAIL line.
// Usage: acceptance [N ...]   (no arguments runs all of them)

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "json.hpp"
#include "strataflow/config.hpp"
#include "strataflow/error.hpp"
#include "strataflow/records.hpp"
#include "strataflow/reservoir.hpp"
#include "strataflow/rng.hpp"
#include "strataflow/simnet.hpp"
#include "strataflow/transport.hpp"
#include "strataflow/whs.hpp"

namespace fs = std::filesystem;
using namespace strataflow;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;  // unbiased
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  for (double x : xs) m.var += (x - m.mean) * (x - m.mean);
  m.var /= static_cast<double>(xs.size() - 1);
  return m;
}

sim::GeneratorSpec gaussian_source(std::uint64_t substream, double mean, double sd, double rate) {
  sim::GeneratorSpec g;
  g.substream = SubStreamId{substream};
  g.distribution = sim::Gaussian{mean, sd};
  g.rate = rate;
  g.seed_component = substream;
  return g;
}

NodeConfig node(std::uint64_t id, std::uint64_t budget, SimTime offset = 0) {
  NodeConfig n;
  n.id = NodeId{id};
  n.budget = budget;
  n.clock_offset = offset;
  return n;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("strataflow-acceptance-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// 1. Synchronized 3-level chain: Y * W at the root reproduces the source count.
Outcome weight_conservation() {
  sim::TopologyConfig cfg;
  cfg.nodes = {node(1, 1'000'000), node(2, 200), node(3, 2000)};
  cfg.edges = {{NodeId{3}, NodeId{2}, 5 * kNanosPerMilli, 0}, {NodeId{2}, NodeId{1}, 5 * kNanosPerMilli, 0}};
  for (std::uint64_t s = 1; s <= 2; ++s) {
    cfg.sources.push_back({gaussian_source(s, 100.0 * s, 10.0, 10'000), NodeId{3}, kNanosPerMilli, 0});
  }
  sim::SimOptions opts;
  opts.seed = 11;
  auto run = sim::Simulation(cfg, opts).run(5);
  double worst = 0.0;
  std::size_t checked = 0;
  for (const auto& w : run.windows) {
    for (std::uint64_t s = 1; s <= 2; ++s) {
      const auto& entries = w.root_sample.entries();
      auto it = entries.find(SubStreamId{s});
      if (it == entries.end()) return {false, "substream missing from root window " + std::to_string(w.window)};
      if (it->second.items.size() != 100) return {false, "root sample is not the 100-item reservoir"};
      const double yw = static_cast<double>(it->second.items.size()) * it->second.meta.weight;
      worst = std::max(worst, std::abs(yw - 10'000.0) / 10'000.0);
      ++checked;
    }
  }
  return {worst <= 1e-9 && checked == 10, "max rel err " + fmt("%.3g", worst) + " over " + std::to_string(checked) +
                                               " (window, substream) pairs"};
}

// 2. Half-interval clock offset with a slow link so batches straddle root
// windows. Each per-substream count estimate must equal the ground-truth
// count of the source intervals present in that root window.
Outcome async_calibration() {
  const SimTime L = kNanosPerSecond;
  sim::TopologyConfig cfg;
  cfg.nodes = {node(1, 60, L / 2), node(2, 200)};
  // 200 items per interval over a 200 item/s link: each batch spans a full
  // interval on the wire.
  cfg.edges = {{NodeId{2}, NodeId{1}, 10 * kNanosPerMilli, 200.0}};
  cfg.sources.push_back({gaussian_source(1, 50, 5, 1000), NodeId{2}, kNanosPerMilli, 0});
  cfg.sources.push_back({gaussian_source(2, 500, 20, 1500), NodeId{2}, kNanosPerMilli, 0});
  sim::SimOptions opts;
  opts.seed = 5;
  sim::Simulation simulation(cfg, opts);
  auto run = simulation.run(12);
  double worst = 0.0;
  std::size_t straddled = 0, checked = 0;
  for (const auto& w : run.windows) {
    for (const auto& [id, entry] : w.root_sample.entries()) {
      std::set<std::uint64_t> intervals;
      for (const Item& item : entry.items) intervals.insert(item.source_interval);
      double truth = 0.0;
      for (auto k : intervals) truth += static_cast<double>(simulation.source_count(id, k));
      const double est = static_cast<double>(entry.items.size()) * entry.meta.weight;
      worst = std::max(worst, std::abs(est - truth) / truth);
      if (intervals.size() > 1) ++straddled;
      ++checked;
    }
  }
  if (straddled == 0) return {false, "no root window received a straddling batch"};
  return {worst <= 1e-9, "max rel err " + fmt("%.3g", worst) + ", " + std::to_string(straddled) + "/" +
                             std::to_string(checked) + " entries straddle source intervals"};
}

// 3-5 share one Monte-Carlo run.
struct SeedSweep {
  std::vector<double> estimates;
  std::vector<double> variances;
  std::vector<double> bounds95;
  std::vector<double> bounds997;
  double exact = 0.0;
  bool exact_fixed = true;
};

const SeedSweep& gaussian_sweep() {
  static const SeedSweep sweep = [] {
    SeedSweep s;
    const auto cfg = sim::scenario_preset("gaussian");
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
      sim::SimOptions opts;
      opts.seed = seed;
      opts.data_seed = 20'260'101;
      opts.fraction = 0.1;
      auto run = sim::Simulation(cfg, opts).run(1);
      const auto& w = run.windows.front();
      if (seed == 1) s.exact = w.exact.sum;
      s.exact_fixed = s.exact_fixed && w.exact.sum == s.exact;
      s.estimates.push_back(w.approx.estimate);
      s.variances.push_back(w.approx.variance);
      s.bounds95.push_back(error_bound(w.approx.variance, Confidence::P95));
      s.bounds997.push_back(error_bound(w.approx.variance, Confidence::P997));
    }
    return s;
  }();
  return sweep;
}

Outcome unbiasedness() {
  const auto& s = gaussian_sweep();
  if (!s.exact_fixed) return {false, "exact sum changed across seeds"};
  const auto m = moments(s.estimates);
  const double se = std::sqrt(m.var / static_cast<double>(s.estimates.size()));
  const double z = (m.mean - s.exact) / se;
  return {std::abs(z) <= 4.0, "mean " + fmt("%.6g", m.mean) + " vs exact " + fmt("%.6g", s.exact) + ", z = " + fmt("%.2f", z)};
}

Outcome coverage() {
  const auto& s = gaussian_sweep();
  std::size_t in95 = 0, in997 = 0;
  for (std::size_t i = 0; i < s.estimates.size(); ++i) {
    const double err = std::abs(s.estimates[i] - s.exact);
    in95 += err <= s.bounds95[i];
    in997 += err <= s.bounds997[i];
  }
  const double c95 = static_cast<double>(in95) / static_cast<double>(s.estimates.size());
  const double c997 = static_cast<double>(in997) / static_cast<double>(s.estimates.size());
  return {c95 >= 0.90 && c95 <= 0.98 && c997 >= 0.985,
          "95% coverage " + fmt("%.3f", c95) + ", 99.7% coverage " + fmt("%.3f", c997)};
}

Outcome variance_calibration() {
  const auto& s = gaussian_sweep();
  const double empirical = moments(s.estimates).var;
  double predicted = 0.0;
  for (double v : s.variances) predicted += v;
  predicted /= static_cast<double>(s.variances.size());
  const double ratio = empirical / predicted;
  return {ratio >= 0.7 && ratio <= 1.4, "empirical/predicted variance = " + fmt("%.3f", ratio)};
}

// 6. Full-rate Gaussian preset (100k items per window).
Outcome accuracy_magnitude() {
  const auto cfg = sim::scenario_preset("gaussian", 1.0);
  double worst = 0.0;
  std::string per;
  for (int pct = 10; pct <= 80; pct += 10) {
    std::vector<double> losses;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      sim::SimOptions opts;
      opts.seed = seed;
      opts.fraction = pct / 100.0;
      auto run = sim::Simulation(cfg, opts).run(2);
      for (const auto& w : run.windows) {
        if (w.exact.count < 100'000) return {false, "window smaller than 1e5 items"};
      }
      losses.insert(losses.end(), run.metrics.accuracy_loss.begin(), run.metrics.accuracy_loss.end());
    }
    const double med = records::median(losses);
    worst = std::max(worst, med);
    per += (per.empty() ? "" : " ") + std::to_string(pct) + "%:" + fmt("%.2e", med);
  }
  return {worst <= 1e-3, "median loss " + per};
}

struct Comparison {
  std::vector<double> whs, srs;
  std::size_t srs_over = 0;
};

Comparison compare(const std::string& scenario, double fraction, std::uint64_t seeds) {
  Comparison c;
  const auto cfg = sim::scenario_preset(scenario);
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    sim::SimOptions opts;
    opts.seed = seed;
    opts.fraction = fraction;
    auto run = sim::Simulation(cfg, opts).run(1);
    const auto& w = run.windows.front();
    c.whs.push_back(sim::accuracy_loss(w.approx.estimate, w.exact.sum));
    c.srs.push_back(sim::accuracy_loss(w.srs.estimate, w.exact.sum));
    c.srs_over += w.srs.estimate > w.exact.sum;
  }
  return c;
}

Outcome whs_vs_srs_heterogeneous() {
  const auto c = compare("setting1", 0.6, 30);
  const double whs = records::median(c.whs), srs = records::median(c.srs);
  return {whs <= 0.5 * srs, "median loss whs " + fmt("%.3e", whs) + ", srs " + fmt("%.3e", srs) + ", ratio " +
                                fmt("%.1fx", srs / whs)};
}

Outcome whs_vs_srs_skew() {
  const auto c = compare("skew", 0.1, 30);
  const double whs = records::median(c.whs), srs = records::median(c.srs);
  return {whs <= 0.1 * srs && c.srs_over > 0, "median loss whs " + fmt("%.3e", whs) + ", srs " + fmt("%.3e", srs) +
                                                  ", ratio " + fmt("%.0fx", srs / whs) + ", srs overestimates in " +
                                                  std::to_string(c.srs_over) + "/30 seeds"};
}

Outcome bandwidth_fraction() {
  const auto cfg = sim::scenario_preset("gaussian");
  double worst = 0.0;
  for (int pct = 10; pct <= 80; pct += 10) {
    const double f = pct / 100.0;
    sim::SimOptions opts;
    opts.seed = 3;
    opts.fraction = f;
    auto run = sim::Simulation(cfg, opts).run(4);
    for (const auto& e : run.metrics.edges) worst = std::max(worst, std::abs(e.forwarded_fraction - f));
  }
  return {worst <= 0.02, "max |forwarded - f| over 6 edges x 8 fractions = " + fmt("%.4f", worst)};
}

Outcome reservoir_uniformity() {
  constexpr int kTrials = 20'000, kN = 100, kR = 10;
  std::array<int, kN> kept{};
  for (int t = 0; t < kTrials; ++t) {
    Rng rng(derive_seed(99, {static_cast<std::uint64_t>(t)}));
    Reservoir r(kR);
    for (int i = 0; i < kN; ++i) r.offer(Item{SubStreamId{1}, 0.0, static_cast<std::uint64_t>(i), 0}, rng);
    for (const Item& item : r.drain().items) ++kept[item.source_seq];
  }
  const double p = static_cast<double>(kR) / kN;
  const double sigma = std::sqrt(p * (1 - p) / kTrials);
  double worst = 0.0;
  for (int c : kept) worst = std::max(worst, std::abs(c / static_cast<double>(kTrials) - p) / sigma);
  return {worst <= 4.0, "max deviation " + fmt("%.2f", worst) + " sigma over " + std::to_string(kN) + " items"};
}

Outcome sharding_equivalence() {
  // One fixed substream; only the sampling randomness varies.
  Rng data(7);
  std::normal_distribution<double> dist(1000.0, 200.0);
  std::vector<Item> items;
  for (std::uint64_t i = 0; i < 5000; ++i) items.push_back(Item{SubStreamId{1}, dist(data), i, 0});
  constexpr std::uint64_t kCapacity = 400;
  std::vector<double> flat, sharded;
  bool bounded = true;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    for (unsigned workers : {1u, 4u}) {
      WhsOptions opts;
      opts.workers = workers;
      opts.seed = seed;
      const auto r = whsamp(items, kCapacity, {}, {}, opts);
      const auto& sample = r.sample.at(SubStreamId{1});
      bounded = bounded && sample.size() <= kCapacity;
      double sum = 0.0;
      for (const Item& it : sample) sum += it.value;
      (workers == 1 ? flat : sharded).push_back(sum * r.w_out.at(SubStreamId{1}));
    }
  }
  const auto a = moments(flat), b = moments(sharded);
  const double se = std::sqrt(a.var / flat.size() + b.var / sharded.size());
  const double z = (a.mean - b.mean) / se;
  return {std::abs(z) <= 4.0 && bounded,
          "mean difference z = " + fmt("%.2f", z) + (bounded ? ", merged sample <= capacity" : ", capacity exceeded")};
}

IntervalBatch random_batch(Rng& rng) {
  IntervalBatch batch(rng.next(), NodeId{rng.next()});
  const auto entries = rng.below(6);
  std::set<std::uint64_t> ids;
  while (ids.size() < entries) ids.insert(rng.next());
  for (auto id : ids) {
    std::vector<Item> items(rng.below(20));
    for (auto& it : items) {
      it.substream = SubStreamId{id};
      it.value = (rng.uniform01() - 0.5) * std::ldexp(1.0, static_cast<int>(rng.below(120)) - 60);
      it.source_seq = rng.next();
      it.source_interval = rng.next();
    }
    const double weight = 1.0 + rng.uniform01() * 1e6;
    const auto n = items.size();
    batch.add_entry(SubStreamId{id}, MetadataRecord{weight, n}, std::move(items));
  }
  return batch;
}

template <class F>
bool raises(ErrorCode expected, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == expected;
  }
  return false;
}

Outcome transport_round_trip() {
  Rng rng(12);
  for (int i = 0; i < 10'000; ++i) {
    const IntervalBatch batch = random_batch(rng);
    const auto bytes = transport::encode_batch(batch);
    const IntervalBatch back = transport::decode_batch(bytes);
    if (!(back == batch)) return {false, "batch " + std::to_string(i) + " changed in transit"};
    if (transport::encode_batch(back) != bytes) return {false, "re-encoding is not canonical"};
  }

  IntervalBatch sample(3, NodeId{9});
  sample.add_entry(SubStreamId{1}, MetadataRecord{2.0, 3},
                   {Item{SubStreamId{1}, 1.0, 0, 3}, Item{SubStreamId{1}, 2.0, 1, 3}, Item{SubStreamId{1}, 3.0, 2, 3}});
  const auto good = transport::encode_batch(sample);
  auto with = [&](auto edit) {
    auto b = good;
    edit(b);
    return b;
  };
  const auto set_len = [](transport::Bytes& b) {
    const auto len = static_cast<std::uint32_t>(b.size() - transport::kFrameHeaderSize);
    std::memcpy(b.data() + 6, &len, 4);
  };
  std::vector<std::pair<std::string, bool>> cases = {
      {"BadMagic", raises(ErrorCode::BadMagic, [&] { transport::decode_batch(with([](auto& b) { b[0] ^= 0xFF; })); })},
      {"UnsupportedVersion",
       raises(ErrorCode::UnsupportedVersion, [&] { transport::decode_batch(with([](auto& b) { b[4] = 2; })); })},
      {"UnknownMessageType",
       raises(ErrorCode::UnknownMessageType, [&] { transport::decode_batch(with([](auto& b) { b[5] = 7; })); })},
      {"TruncatedPayload (frame)", raises(ErrorCode::TruncatedPayload, [&] {
         transport::decode_batch(with([](auto& b) { b.resize(transport::kFrameHeaderSize + 5); }));
       })},
      {"TruncatedPayload (after header)", raises(ErrorCode::TruncatedPayload, [&] {
         transport::decode_batch(with([&](auto& b) {
           b.resize(transport::kFrameHeaderSize + transport::kBatchHeaderSize + 4);
           set_len(b);
         }));
       })},
      {"CountMismatch", raises(ErrorCode::CountMismatch, [&] {
         transport::decode_batch(with([&](auto& b) {
           b.resize(b.size() - transport::kItemSize);  // declared 3, carries 2
           set_len(b);
         }));
       })},
  };
  std::string failed;
  for (const auto& [name, ok] : cases)
    if (!ok) failed += " " + name;
  if (!failed.empty()) return {false, "malformed cases not rejected:" + failed};
  return {true, "10000 random batches round-trip; " + std::to_string(cases.size()) + " malformed cases rejected"};
}

int run_cli(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string("'") + STRATAFLOW_CLI + "' " + args + " > '" + out.string() + "' 2>/dev/null";
  return std::system(cmd.c_str());
}

Outcome determinism() {
  const auto dir = scratch_dir("determinism");
  const std::vector<std::string> invocations = {
      "simulate --scenario gaussian --fractions 10,50 --seeds 1-4 --windows 3",
      "simulate --scenario skew --fractions 10 --seeds 7,8 --windows 2 --policy proportional --workers 2",
      "simulate --scenario setting1 --fractions 60 --seeds 1-6 --windows 2 --parallel-seeds 3",
  };
  std::size_t lines = 0;
  for (std::size_t i = 0; i < invocations.size(); ++i) {
    const auto a = dir / ("a" + std::to_string(i)), b = dir / ("b" + std::to_string(i));
    if (run_cli(invocations[i], a) != 0 || run_cli(invocations[i], b) != 0) return {false, "simulate failed: " + invocations[i]};
    const auto x = slurp(a), y = slurp(b);
    if (x.empty() || x != y) return {false, "outputs differ: " + invocations[i]};
    lines += static_cast<std::size_t>(std::count(x.begin(), x.end(), '\n'));
  }
  // Parallel and sequential seed execution must agree too.
  const auto seq = dir / "seq", par = dir / "par";
  run_cli("simulate --scenario setting1 --fractions 60 --seeds 1-6 --windows 2", seq);
  if (slurp(seq) != slurp(dir / "a2")) return {false, "--parallel-seeds changed the output"};
  fs::remove_all(dir);
  return {true, std::to_string(invocations.size()) + " invocations byte-identical on rerun (" + std::to_string(lines) +
                    " records)"};
}

// 14. feeder -> sampler -> root as three processes on loopback, against the
// in-process simulator on the same workload.
Outcome cross_mode() {
  const auto dir = scratch_dir("crossmode");
  const auto cfg_path = dir / "chain.json";
  {
    std::ofstream out(cfg_path);
    out << R"({"version": 1, "name": "chain", "interval_ms": 1000,
  "nodes": [{"id": 1, "budget": 60}, {"id": 2, "budget": 60}],
  "edges": [{"child": 2, "parent": 1, "latency_ms": 5}],
  "sources": [
    {"substream": 1, "leaf": 2, "latency_ms": 2, "generator": {"distribution": "gaussian", "mean": 10, "stddev": 5, "rate": 400}},
    {"substream": 2, "leaf": 2, "latency_ms": 2, "generator": {"distribution": "gaussian", "mean": 1000, "stddev": 50, "rate": 200, "seed_component": 1}},
    {"substream": 3, "leaf": 2, "latency_ms": 2, "generator": {"distribution": "poisson", "lambda": 10000, "rate": 20, "seed_component": 2}}]})";
  }
  const auto cfg = config::load_topology(cfg_path.string());
  constexpr std::uint64_t kWindows = 2;
  std::vector<double> loopback, inproc;
  for (std::uint64_t run = 1; run <= 30; ++run) {
    const std::uint64_t seed = 100 + run;
    const auto rdir = dir / std::to_string(run);
    fs::create_directories(rdir);
    const std::string cli = std::string("'") + STRATAFLOW_CLI + "'";
    const std::string common = " --config '" + cfg_path.string() + "' --seed " + std::to_string(seed) + " --windows " +
                               std::to_string(kWindows);
    const std::string r = rdir.string();
    const std::string script =
        "set -e; cd '" + r + "'; " + cli + " node --node-id 1 --listen 127.0.0.1:0 --port-file p1" + common +
        " > root.out 2> root.err & R=$!; "
        "i=0; while [ ! -f p1 ]; do sleep 0.02; i=$((i+1)); [ $i -lt 500 ]; done; " +
        cli + " node --node-id 2 --listen 127.0.0.1:0 --port-file p2 --connect 127.0.0.1:$(cat p1)" + common +
        " 2> mid.err & M=$!; "
        "i=0; while [ ! -f p2 ]; do sleep 0.02; i=$((i+1)); [ $i -lt 500 ]; done; " +
        cli + " node --role feeder --node-id 2 --connect 127.0.0.1:$(cat p2)" + common + " 2> feed.err; wait $M; wait $R";
    std::ofstream(rdir / "run.sh") << script << "\n";
    const std::string cmd = "sh '" + (rdir / "run.sh").string() + "'";
    if (std::system(cmd.c_str()) != 0) return {false, "loopback pipeline failed in run " + std::to_string(run)};

    std::ifstream in(rdir / "root.out");
    std::string line;
    std::size_t windows = 0;
    while (std::getline(in, line)) {
      loopback.push_back(nlohmann::json::parse(line).at("estimate").get<double>());
      ++windows;
    }
    if (windows != kWindows) return {false, "root printed " + std::to_string(windows) + " windows in run " + std::to_string(run)};

    sim::SimOptions opts;
    opts.seed = seed;
    auto result = sim::Simulation(cfg, opts).run(kWindows);
    for (const auto& w : result.windows) inproc.push_back(w.approx.estimate);
  }
  fs::remove_all(dir);
  const auto a = moments(loopback), b = moments(inproc);
  const double se = std::sqrt(a.var / loopback.size() + b.var / inproc.size());
  const double z = se > 0 ? (a.mean - b.mean) / se : 0.0;
  return {std::abs(z) <= 4.0, "30 runs x " + std::to_string(kWindows) + " windows, loopback mean " + fmt("%.6g", a.mean) +
                                  ", in-process mean " + fmt("%.6g", b.mean) + ", z = " + fmt("%.2f", z)};
}

struct Check {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Check> checks = {
      {1, "weight conservation", weight_conservation},
      {2, "async calibration", async_calibration},
      {3, "unbiasedness", unbiasedness},
      {4, "error-bound coverage", coverage},
      {5, "variance calibration", variance_calibration},
      {6, "accuracy-loss magnitude", accuracy_magnitude},
      {7, "WHS beats SRS (heterogeneous rates)", whs_vs_srs_heterogeneous},
      {8, "WHS beats SRS (skew)", whs_vs_srs_skew},
      {9, "bandwidth fraction", bandwidth_fraction},
      {10, "reservoir uniformity", reservoir_uniformity},
      {11, "worker-sharding equivalence", sharding_equivalence},
      {12, "transport round trip", transport_round_trip},
      {13, "determinism", determinism},
      {14, "cross-mode equivalence", cross_mode},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : checks) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s [%2d] %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
