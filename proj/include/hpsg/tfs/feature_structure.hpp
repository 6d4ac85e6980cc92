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

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hpsg/tfs/type_hierarchy.hpp"

namespace hpsg {

using NodeId = std::uint32_t;

/// Sequence of features from the root; empty denotes the root itself.
using FeaturePath = std::vector<FeatureId>;

std::string to_string(const TypeHierarchy& h, const FeaturePath& path);
/// Parses "A.B.C" (or "" for the root). Throws UnknownFeature.
FeaturePath parse_path(const TypeHierarchy& h, std::string_view dotted);

class MalformedStructure : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Immutable typed feature structure: a rooted, acyclic graph whose nodes
/// carry types and whose arcs are labelled with features. Shared nodes
/// express reentrancy.
///
/// Nodes are numbered in depth-first, feature-ordered preorder from the root,
/// so the root is always node 0 and two isomorphic structures have identical
/// node tables.
class FeatureStructure {
 public:
  struct Arc {
    FeatureId feature;
    NodeId target;
    friend bool operator==(const Arc&, const Arc&) = default;
  };

  FeatureStructure() = default;

  /// Single node of the given type.
  static FeatureStructure atom(TypeId type);

  NodeId root() const { return 0; }
  std::size_t size() const { return types_.size(); }
  bool empty() const { return types_.empty(); }

  TypeId type(NodeId n) const { return types_.at(n); }
  std::span<const Arc> arcs(NodeId n) const {
    return {arcs_.data() + offsets_.at(n), offsets_.at(n + 1) - offsets_.at(n)};
  }
  std::optional<NodeId> follow(NodeId n, FeatureId f) const;
  std::optional<NodeId> follow(NodeId n, const FeaturePath& path) const;
  std::optional<NodeId> follow(const FeaturePath& path) const { return follow(root(), path); }

  /// Substructure rooted at `n`, renumbered.
  FeatureStructure subgraph(NodeId n) const;
  /// Copy without the listed features on the root node.
  FeatureStructure without_root_features(std::span<const FeatureId> drop) const;
  /// Copy with node `n` retyped.
  FeatureStructure with_type(NodeId n, TypeId t) const;

  friend bool operator==(const FeatureStructure&, const FeatureStructure&) = default;

 private:
  friend class FsBuilder;

  std::vector<TypeId> types_;
  std::vector<std::uint32_t> offsets_;  // size()+1 entries into arcs_
  std::vector<Arc> arcs_;
};

/// Mutable scratch graph used to assemble a FeatureStructure.
class FsBuilder {
 public:
  NodeId add_node(TypeId type);
  /// Adds or replaces the arc `feature` of `from`.
  void set_arc(NodeId from, FeatureId feature, NodeId to);
  void set_type(NodeId n, TypeId type) { nodes_.at(n).type = type; }
  TypeId type(NodeId n) const { return nodes_.at(n).type; }
  std::optional<NodeId> arc(NodeId from, FeatureId feature) const;
  std::size_t size() const { return nodes_.size(); }

  /// Keeps only nodes reachable from `root` and normalizes numbering.
  /// Throws MalformedStructure on dangling arcs or cycles.
  FeatureStructure build(NodeId root) const;

 private:
  struct Node {
    TypeId type;
    std::vector<FeatureStructure::Arc> arcs;
  };
  std::vector<Node> nodes_;
};

/// Checks that every arc is licensed by the hierarchy's appropriateness
/// conditions: the node's type is at or below the feature's introducing type
/// and the value type is compatible with the restriction. Returns the first
/// offending path, if any.
std::optional<std::string> check_appropriateness(const TypeHierarchy& h,
                                                 const FeatureStructure& fs);

/// Type inference: narrows every node to the introducing type of each of
/// its features and every value to the feature's restriction. Returns
/// nullopt (and sets `error`) when a narrowing is impossible.
std::optional<FeatureStructure> infer_types(const TypeHierarchy& h, const FeatureStructure& fs,
                                            std::string* error = nullptr);

/// Indented attribute-value matrix text; reentrant nodes are tagged #0, #1, ...
/// in first-visit order.
std::string write_avm(const TypeHierarchy& h, const FeatureStructure& fs);

/// One-line TDL-style description (`type & [ F #0 & t, G #0 ]`), readable by
/// parse_description.
std::string write_tdl(const TypeHierarchy& h, const FeatureStructure& fs);

}  // namespace hpsg
