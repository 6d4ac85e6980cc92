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

#include "hpsg/tfs/feature_structure.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace hpsg {

std::string to_string(const TypeHierarchy& h, const FeaturePath& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += '.';
    out += h.feature_name(path[i]);
  }
  return out;
}

FeaturePath parse_path(const TypeHierarchy& h, std::string_view dotted) {
  FeaturePath path;
  while (!dotted.empty()) {
    auto dot = dotted.find('.');
    path.push_back(h.feature(dotted.substr(0, dot)));
    if (dot == std::string_view::npos) break;
    dotted.remove_prefix(dot + 1);
  }
  return path;
}

FeatureStructure FeatureStructure::atom(TypeId type) {
  FsBuilder b;
  return b.build(b.add_node(type));
}

std::optional<NodeId> FeatureStructure::follow(NodeId n, FeatureId f) const {
  auto a = arcs(n);
  auto it = std::lower_bound(a.begin(), a.end(), f,
                             [](const Arc& arc, FeatureId x) { return arc.feature < x; });
  if (it == a.end() || it->feature != f) return std::nullopt;
  return it->target;
}

std::optional<NodeId> FeatureStructure::follow(NodeId n, const FeaturePath& path) const {
  std::optional<NodeId> cur = n;
  for (FeatureId f : path) {
    cur = follow(*cur, f);
    if (!cur) return std::nullopt;
  }
  return cur;
}

namespace {

// Copies the part of `fs` reachable from `start` into a fresh builder.
FsBuilder copy_into_builder(const FeatureStructure& fs) {
  FsBuilder b;
  for (NodeId n = 0; n < fs.size(); ++n) b.add_node(fs.type(n));
  for (NodeId n = 0; n < fs.size(); ++n)
    for (const auto& arc : fs.arcs(n)) b.set_arc(n, arc.feature, arc.target);
  return b;
}

}  // namespace

FeatureStructure FeatureStructure::subgraph(NodeId n) const {
  return copy_into_builder(*this).build(n);
}

FeatureStructure FeatureStructure::without_root_features(std::span<const FeatureId> drop) const {
  FsBuilder b;
  for (NodeId n = 0; n < size(); ++n) b.add_node(type(n));
  for (NodeId n = 0; n < size(); ++n)
    for (const auto& arc : arcs(n)) {
      if (n == root() && std::find(drop.begin(), drop.end(), arc.feature) != drop.end()) continue;
      b.set_arc(n, arc.feature, arc.target);
    }
  return b.build(root());
}

FeatureStructure FeatureStructure::with_type(NodeId n, TypeId t) const {
  FeatureStructure copy = *this;
  copy.types_.at(n) = t;
  return copy;
}

NodeId FsBuilder::add_node(TypeId type) {
  nodes_.push_back({type, {}});
  return static_cast<NodeId>(nodes_.size() - 1);
}

void FsBuilder::set_arc(NodeId from, FeatureId feature, NodeId to) {
  auto& arcs = nodes_.at(from).arcs;
  auto it = std::lower_bound(arcs.begin(), arcs.end(), feature,
                             [](const auto& a, FeatureId f) { return a.feature < f; });
  if (it != arcs.end() && it->feature == feature)
    it->target = to;
  else
    arcs.insert(it, {feature, to});
}

std::optional<NodeId> FsBuilder::arc(NodeId from, FeatureId feature) const {
  for (const auto& a : nodes_.at(from).arcs)
    if (a.feature == feature) return a.target;
  return std::nullopt;
}

FeatureStructure FsBuilder::build(NodeId root) const {
  if (root >= nodes_.size()) throw MalformedStructure("root node does not exist");
  constexpr NodeId unvisited = UINT32_MAX;
  std::vector<NodeId> renumber(nodes_.size(), unvisited);
  std::vector<char> on_stack(nodes_.size(), 0);
  std::vector<NodeId> order;

  // Iterative preorder DFS in feature order with cycle detection.
  std::vector<std::pair<NodeId, std::size_t>> stack;
  renumber[root] = 0;
  order.push_back(root);
  on_stack[root] = 1;
  stack.emplace_back(root, 0);
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    const auto& arcs = nodes_[node].arcs;
    if (next < arcs.size()) {
      NodeId t = arcs[next++].target;
      if (t >= nodes_.size()) throw MalformedStructure("arc to nonexistent node");
      if (on_stack[t]) throw MalformedStructure("cyclic feature structure");
      if (renumber[t] == unvisited) {
        renumber[t] = static_cast<NodeId>(order.size());
        order.push_back(t);
        on_stack[t] = 1;
        stack.emplace_back(t, 0);
      }
    } else {
      on_stack[node] = 0;
      stack.pop_back();
    }
  }

  FeatureStructure fs;
  fs.types_.reserve(order.size());
  fs.offsets_.reserve(order.size() + 1);
  fs.offsets_.push_back(0);
  for (NodeId old : order) {
    fs.types_.push_back(nodes_[old].type);
    for (const auto& a : nodes_[old].arcs) fs.arcs_.push_back({a.feature, renumber[a.target]});
    fs.offsets_.push_back(static_cast<std::uint32_t>(fs.arcs_.size()));
  }
  return fs;
}

std::optional<std::string> check_appropriateness(const TypeHierarchy& h,
                                                 const FeatureStructure& fs) {
  // Walk with paths so the report can name the offending location.
  std::vector<std::pair<NodeId, FeaturePath>> stack{{fs.root(), {}}};
  std::vector<char> seen(fs.size(), 0);
  while (!stack.empty()) {
    auto [n, path] = std::move(stack.back());
    stack.pop_back();
    if (seen[n]) continue;
    seen[n] = 1;
    for (const auto& arc : fs.arcs(n)) {
      FeaturePath child = path;
      child.push_back(arc.feature);
      if (!h.appropriate(fs.type(n), arc.feature))
        return "feature " + h.feature_name(arc.feature) + " is not appropriate for type " +
               h.name(fs.type(n)) + " at " + (path.empty() ? "<root>" : to_string(h, path));
      TypeId restriction = h.value_restriction(fs.type(n), arc.feature);
      if (!h.glb(fs.type(arc.target), restriction))
        return "value " + h.name(fs.type(arc.target)) + " of " + to_string(h, child) +
               " is incompatible with restriction " + h.name(restriction);
      stack.emplace_back(arc.target, std::move(child));
    }
  }
  return std::nullopt;
}

std::optional<FeatureStructure> infer_types(const TypeHierarchy& h, const FeatureStructure& fs,
                                            std::string* error) {
  std::vector<TypeId> types(fs.size());
  for (NodeId n = 0; n < fs.size(); ++n) types[n] = fs.type(n);
  auto fail = [&](const std::string& msg) -> std::optional<FeatureStructure> {
    if (error) *error = msg;
    return std::nullopt;
  };
  // Narrowing a node can change the restriction of its own arcs (narrowed
  // appropriateness), so iterate to a fixpoint.
  for (bool changed = true; changed;) {
    changed = false;
    for (NodeId n = 0; n < fs.size(); ++n) {
      for (const auto& arc : fs.arcs(n)) {
        auto t = h.glb(types[n], h.introduced_by(arc.feature));
        if (!t)
          return fail("feature " + h.feature_name(arc.feature) + " is not appropriate for type " +
                      h.name(types[n]));
        if (*t != types[n]) {
          types[n] = *t;
          changed = true;
        }
      }
    }
    for (NodeId n = 0; n < fs.size(); ++n) {
      for (const auto& arc : fs.arcs(n)) {
        TypeId restriction = h.value_restriction(types[n], arc.feature);
        auto v = h.glb(types[arc.target], restriction);
        if (!v)
          return fail("value " + h.name(types[arc.target]) + " of feature " +
                      h.feature_name(arc.feature) + " is incompatible with restriction " +
                      h.name(restriction));
        if (*v != types[arc.target]) {
          types[arc.target] = *v;
          changed = true;
        }
      }
    }
  }
  FeatureStructure out = fs;
  for (NodeId n = 0; n < fs.size(); ++n)
    if (types[n] != fs.type(n)) out = out.with_type(n, types[n]);
  return out;
}

namespace {

std::vector<int> indegrees(const FeatureStructure& fs) {
  std::vector<int> in(fs.size(), 0);
  for (NodeId n = 0; n < fs.size(); ++n)
    for (const auto& arc : fs.arcs(n)) ++in[arc.target];
  return in;
}

}  // namespace

std::string write_avm(const TypeHierarchy& h, const FeatureStructure& fs) {
  if (fs.empty()) return "<empty>\n";
  auto in = indegrees(fs);
  std::vector<int> tag(fs.size(), -1);
  std::vector<char> printed(fs.size(), 0);
  int next_tag = 0;
  std::ostringstream out;

  auto emit = [&](auto&& self, NodeId n, int indent) -> void {
    std::string prefix;
    if (in[n] > 1) {
      if (tag[n] < 0) tag[n] = next_tag++;
      prefix = "#" + std::to_string(tag[n]) + " ";
    }
    if (printed[n]) {
      out << "#" << tag[n] << "\n";
      return;
    }
    printed[n] = 1;
    out << prefix << h.name(fs.type(n)) << "\n";
    for (const auto& arc : fs.arcs(n)) {
      out << std::string(static_cast<std::size_t>(indent + 2), ' ') << h.feature_name(arc.feature)
          << ": ";
      self(self, arc.target, indent + 2);
    }
  };
  emit(emit, fs.root(), 0);
  return out.str();
}

std::string write_tdl(const TypeHierarchy& h, const FeatureStructure& fs) {
  if (fs.empty()) return "";
  auto in = indegrees(fs);
  std::vector<int> tag(fs.size(), -1);
  std::vector<char> printed(fs.size(), 0);
  int next_tag = 0;
  std::string out;

  auto emit = [&](auto&& self, NodeId n) -> void {
    bool tagged = in[n] > 1;
    if (tagged && tag[n] < 0) tag[n] = next_tag++;
    if (printed[n]) {
      out += "#" + std::to_string(tag[n]);
      return;
    }
    printed[n] = 1;
    if (tagged) out += "#" + std::to_string(tag[n]) + " & ";
    out += h.name(fs.type(n));
    auto arcs = fs.arcs(n);
    if (arcs.empty()) return;
    out += " & [ ";
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      if (i) out += ", ";
      out += h.feature_name(arcs[i].feature) + " ";
      self(self, arcs[i].target);
    }
    out += " ]";
  };
  emit(emit, fs.root());
  return out;
}

}  // namespace hpsg
