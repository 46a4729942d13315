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

#include <array>
#include <cmath>
#include <string>

#include "strataflow/error.hpp"
#include "strataflow/simnet.hpp"

namespace strataflow::sim {

namespace {

constexpr SimTime kMs = kNanosPerMilli;
// 1 Gbps carrying 24-byte items.
constexpr double kLinkCapacity = 1e9 / (24.0 * 8.0);
constexpr double kDefaultFraction = 0.1;

using Rates = std::array<double, 4>;  // items per second for types A-D

struct Preset {
  std::array<Distribution, 4> dists;
  Rates rates;
};

constexpr Rates kSetting1{50'000, 25'000, 12'500, 625};
constexpr Rates kSetting2{25'000, 25'000, 25'000, 25'000};
constexpr Rates kSetting3{625, 12'500, 25'000, 50'000};

std::array<Distribution, 4> gaussians() {
  return {Gaussian{10, 5}, Gaussian{1000, 50}, Gaussian{10'000, 500}, Gaussian{100'000, 5000}};
}

std::array<Distribution, 4> poissons() { return {Poisson{10}, Poisson{100}, Poisson{1000}, Poisson{10'000}}; }

std::optional<Preset> lookup(std::string_view name) {
  if (name == "gaussian" || name == "setting2" || name == "uniform") return Preset{gaussians(), kSetting2};
  if (name == "setting1") return Preset{gaussians(), kSetting1};
  if (name == "setting3") return Preset{gaussians(), kSetting3};
  if (name == "poisson" || name == "setting2-poisson") return Preset{poissons(), kSetting2};
  if (name == "setting1-poisson") return Preset{poissons(), kSetting1};
  if (name == "setting3-poisson") return Preset{poissons(), kSetting3};
  if (name == "skew") {
    constexpr double total = 5'000'000;
    return Preset{{Poisson{10}, Poisson{100}, Poisson{1000}, Poisson{1e7}},
                  {total * 0.8, total * 0.1989, total * 0.001, total * 0.0001}};
  }
  return std::nullopt;
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"gaussian", "poisson",  "setting1", "setting1-poisson", "setting2", "setting2-poisson",
          "setting3", "setting3-poisson", "skew",     "uniform"};
}

TopologyConfig scenario_preset(std::string_view name, double scale) {
  const auto preset = lookup(name);
  if (!preset) {
    std::string valid;
    for (const auto& n : scenario_names()) valid += (valid.empty() ? "" : ", ") + n;
    raise(ErrorCode::UnknownScenario, "unknown scenario '" + std::string(name) + "' (valid: " + valid + ")");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) raise(ErrorCode::InvalidConfig, "scale must be positive");

  TopologyConfig cfg;
  cfg.name = std::string(name);
  cfg.interval_length = kNanosPerSecond;

  // Root 1, mid layer 2-3, leaves 4-7.
  for (std::uint64_t id = 1; id <= 7; ++id) {
    NodeConfig node;
    node.id = NodeId{id};
    cfg.nodes.push_back(node);
  }
  for (std::uint64_t id = 2; id <= 7; ++id) {
    const bool leaf = id >= 4;
    cfg.edges.push_back(EdgeSpec{NodeId{id}, NodeId{leaf ? id / 2 : 1}, (leaf ? 20 : 40) * kMs, kLinkCapacity});
  }

  // Source s carries type s % 4, so every leaf sees two types.
  std::array<double, 8> leaf_rate{};
  for (std::uint64_t s = 0; s < 8; ++s) {
    GeneratorSpec gen;
    gen.substream = SubStreamId{s + 1};
    gen.distribution = preset->dists[s % 4];
    gen.rate = preset->rates[s % 4] / 2.0 * scale;
    gen.seed_component = s;
    const std::uint64_t leaf = 4 + s / 2;
    leaf_rate[leaf] += gen.rate;
    cfg.sources.push_back(SourceSpec{gen, NodeId{leaf}, 10 * kMs, kLinkCapacity});
  }

  for (auto& node : cfg.nodes) {
    const std::uint64_t id = node.id.value;
    if (id >= 4) node.budget = std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::round(kDefaultFraction * leaf_rate[id])));
  }
  for (std::uint64_t mid = 2; mid <= 3; ++mid) cfg.nodes[mid - 1].budget = cfg.nodes[2 * mid - 1].budget + cfg.nodes[2 * mid].budget;
  cfg.nodes[0].budget = cfg.nodes[1].budget + cfg.nodes[2].budget;
  return cfg;
}

}  // namespace strataflow::sim
