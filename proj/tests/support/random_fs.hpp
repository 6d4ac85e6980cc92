//  Copyright 2026 The hpsgkit Authors
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

#pragma once

// Hand-rolled generators for property tests over feature structures.

#include <random>
#include <vector>

#include "hpsg/tfs/feature_structure.hpp"

namespace hpsg::testkit {

struct FsVocabulary {
  std::vector<TypeId> types;
  std::vector<FeatureId> features;
};

// Random acyclic structure of at most `max_nodes` nodes. Reentrancies are
// introduced by pointing an arc at an earlier node that is still a leaf.
inline FeatureStructure random_fs(std::mt19937& rng, const FsVocabulary& vocab,
                                  std::size_t max_nodes, double share_p = 0.25) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  FsBuilder b;
  std::vector<NodeId> parent;
  std::vector<int> out;
  b.add_node(vocab.types[pick(vocab.types.size())]);
  parent.push_back(UINT32_MAX);
  out.push_back(0);
  std::size_t target = 1 + pick(max_nodes);
  std::size_t attempts = 0;
  while (b.size() < target && attempts++ < 4 * max_nodes) {
    NodeId from = static_cast<NodeId>(pick(b.size()));
    FeatureId f = vocab.features[pick(vocab.features.size())];
    if (b.arc(from, f)) continue;
    if (b.size() > 1 && coin(rng) < share_p) {
      NodeId to = static_cast<NodeId>(pick(b.size()));
      bool ancestor = false;
      for (NodeId n = from; n != UINT32_MAX; n = parent[n])
        if (n == to) ancestor = true;
      // Sharing only nodes without outgoing arcs keeps the graph acyclic.
      if (!ancestor && to != 0 && out[to] == 0) {
        b.set_arc(from, f, to);
        ++out[from];
        continue;
      }
    }
    NodeId to = b.add_node(vocab.types[pick(vocab.types.size())]);
    parent.push_back(from);
    out.push_back(0);
    b.set_arc(from, f, to);
    ++out[from];
  }
  return b.build(0);
}

}  // namespace hpsg::testkit
