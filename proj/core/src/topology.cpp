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

#include "topology.hpp"

#include <algorithm>
#include <string>

#include "strataflow/error.hpp"

namespace strataflow::sim::detail {

namespace {

std::string node_name(NodeId id) { return "node " + std::to_string(id.value); }

}  // namespace

TreeIndex analyze_tree(TopologyConfig& config) {
  TreeIndex tree;
  const std::size_t n = config.nodes.size();
  if (n == 0) raise(ErrorCode::NoRoot, "topology has no nodes");
  if (config.interval_length <= 0) raise(ErrorCode::InvalidConfig, "interval length must be positive");

  for (std::size_t i = 0; i < n; ++i) {
    if (!tree.index.emplace(config.nodes[i].id, i).second) {
      raise(ErrorCode::InvalidConfig, "duplicate " + node_name(config.nodes[i].id));
    }
  }
  const auto lookup = [&](NodeId id) {
    auto it = tree.index.find(id);
    if (it == tree.index.end()) raise(ErrorCode::UnknownNode, node_name(id));
    return it->second;
  };

  tree.parent.assign(n, std::nullopt);
  tree.parent_edge.assign(n, std::nullopt);
  tree.children.assign(n, {});
  tree.sources.assign(n, {});
  for (std::size_t e = 0; e < config.edges.size(); ++e) {
    const auto& edge = config.edges[e];
    const std::size_t c = lookup(edge.child);
    const std::size_t p = lookup(edge.parent);
    if (c == p) raise(ErrorCode::CycleDetected, node_name(edge.child) + " is its own parent");
    if (tree.parent[c]) raise(ErrorCode::InvalidConfig, node_name(edge.child) + " has two parents");
    if (edge.latency < 0 || edge.capacity < 0) raise(ErrorCode::InvalidConfig, "negative latency or capacity");
    tree.parent[c] = p;
    tree.parent_edge[c] = e;
    tree.children[p].push_back(c);
  }

  for (std::size_t i = 0; i < n; ++i) {
    auto& node = config.nodes[i];
    const std::optional<NodeId> derived =
        tree.parent[i] ? std::optional(config.nodes[*tree.parent[i]].id) : std::nullopt;
    if (node.parent && node.parent != derived) {
      raise(ErrorCode::InvalidConfig, node_name(node.id) + " parent disagrees with the edge list");
    }
    node.parent = derived;
    node.interval_length = config.interval_length;
  }

  // Walking up from every node must terminate at a root.
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t steps = 0;
    for (std::size_t cur = i; tree.parent[cur]; cur = *tree.parent[cur]) {
      if (++steps > n) raise(ErrorCode::CycleDetected, "cycle through " + node_name(config.nodes[i].id));
    }
  }
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i)
    if (!tree.parent[i]) roots.push_back(i);
  if (roots.empty()) raise(ErrorCode::NoRoot, "every node has a parent");
  if (roots.size() > 1) {
    raise(ErrorCode::MultipleRoots, node_name(config.nodes[roots[0]].id) + " and " +
                                        node_name(config.nodes[roots[1]].id) + " have no parent");
  }
  tree.root = roots.front();

  tree.depth.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t cur = i; tree.parent[cur]; cur = *tree.parent[cur]) ++tree.depth[i];

  tree.bottom_up.resize(n);
  for (std::size_t i = 0; i < n; ++i) tree.bottom_up[i] = i;
  std::stable_sort(tree.bottom_up.begin(), tree.bottom_up.end(),
                   [&](std::size_t a, std::size_t b) { return tree.depth[a] > tree.depth[b]; });

  for (std::size_t s = 0; s < config.sources.size(); ++s) {
    const auto& src = config.sources[s];
    auto it = tree.index.find(src.leaf);
    if (it == tree.index.end()) raise(ErrorCode::OrphanSource, "source attached to unknown " + node_name(src.leaf));
    if (!tree.children[it->second].empty()) {
      raise(ErrorCode::OrphanSource, "source attached to interior " + node_name(src.leaf));
    }
    if (src.latency < 0 || src.capacity < 0) raise(ErrorCode::InvalidConfig, "negative source latency or capacity");
    tree.sources[it->second].push_back(s);
  }
  return tree;
}

}  // namespace strataflow::sim::detail
