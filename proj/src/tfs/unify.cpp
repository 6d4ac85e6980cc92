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

#include "hpsg/tfs/unify.hpp"

#include <algorithm>
#include <unordered_map>

namespace hpsg {

std::string UnifyFailure::describe(const TypeHierarchy& h) const {
  std::string where = path.empty() ? "<root>" : to_string(h, path);
  if (cyclic) return "unification would create a cycle (at " + where + ")";
  return "type clash at " + where + ": " + h.name(left) + " vs " + h.name(right);
}

namespace {

using Arc = FeatureStructure::Arc;

// Union-find over the nodes of both operands (second operand offset by the
// size of the first). Arc lists live in one arena and are reallocated at the
// end of it when a representative gains features.
class Unifier {
 public:
  Unifier(const TypeHierarchy& h, const FeatureStructure& a, const FeatureStructure& b)
      : h_(h), offset_(static_cast<NodeId>(a.size())) {
    slots_.reserve(a.size() + b.size());
    load(a, 0);
    load(b, offset_);
  }

  NodeId offset() const { return offset_; }

  bool unify(NodeId x, NodeId y) {
    x = find(x);
    y = find(y);
    if (x == y) return true;
    auto t = h_.glb(slots_[x].type, slots_[y].type);
    if (!t) {
      failure_ = UnifyFailure{path_, slots_[x].type, slots_[y].type, false};
      return false;
    }
    slots_[y].parent = x;
    slots_[x].type = *t;
    const std::uint32_t begin = slots_[y].begin, count = slots_[y].count;
    for (std::uint32_t i = 0; i < count; ++i) {
      const Arc arc = arena_[begin + i];
      NodeId r = find(x);
      if (auto existing = lookup(r, arc.feature)) {
        path_.push_back(arc.feature);
        if (!unify(*existing, arc.target)) return false;
        path_.pop_back();
      } else {
        add_arc(r, arc);
      }
    }
    return true;
  }

  UnifyResult result(NodeId root) {
    FsBuilder b;
    std::unordered_map<NodeId, NodeId> built;
    std::vector<NodeId> work;
    auto node_for = [&](NodeId n) {
      n = find(n);
      auto [it, fresh] = built.emplace(n, 0);
      if (fresh) {
        it->second = b.add_node(slots_[n].type);
        work.push_back(n);
      }
      return it->second;
    };
    NodeId r = node_for(root);
    while (!work.empty()) {
      NodeId n = work.back();
      work.pop_back();
      NodeId from = built.at(n);
      const std::uint32_t begin = slots_[n].begin, count = slots_[n].count;
      for (std::uint32_t i = 0; i < count; ++i) {
        Arc arc = arena_[begin + i];
        b.set_arc(from, arc.feature, node_for(arc.target));
      }
    }
    try {
      return b.build(r);
    } catch (const MalformedStructure&) {
      return UnifyFailure{{}, TypeId{}, TypeId{}, true};
    }
  }

  const UnifyFailure& failure() const { return failure_; }
  void set_path(FeaturePath p) { path_ = std::move(p); }

 private:
  struct Slot {
    NodeId parent;
    TypeId type;
    std::uint32_t begin;
    std::uint32_t count;
  };

  void load(const FeatureStructure& fs, NodeId base) {
    for (NodeId n = 0; n < fs.size(); ++n) {
      auto arcs = fs.arcs(n);
      slots_.push_back({base + n, fs.type(n), static_cast<std::uint32_t>(arena_.size()),
                        static_cast<std::uint32_t>(arcs.size())});
      for (const auto& a : arcs) arena_.push_back({a.feature, a.target + base});
    }
  }

  NodeId find(NodeId n) {
    while (slots_[n].parent != n) {
      slots_[n].parent = slots_[slots_[n].parent].parent;
      n = slots_[n].parent;
    }
    return n;
  }

  std::optional<NodeId> lookup(NodeId n, FeatureId f) const {
    const Slot& s = slots_[n];
    for (std::uint32_t i = 0; i < s.count; ++i)
      if (arena_[s.begin + i].feature == f) return arena_[s.begin + i].target;
    return std::nullopt;
  }

  void add_arc(NodeId n, Arc arc) {
    Slot& s = slots_[n];
    auto begin = static_cast<std::uint32_t>(arena_.size());
    bool placed = false;
    for (std::uint32_t i = 0; i < s.count; ++i) {
      Arc cur = arena_[s.begin + i];
      if (!placed && arc.feature < cur.feature) {
        arena_.push_back(arc);
        placed = true;
      }
      arena_.push_back(cur);
    }
    if (!placed) arena_.push_back(arc);
    s.begin = begin;
    ++s.count;
  }

  const TypeHierarchy& h_;
  NodeId offset_;
  std::vector<Slot> slots_;
  std::vector<Arc> arena_;
  FeaturePath path_;
  UnifyFailure failure_;
};

}  // namespace

UnifyResult unify(const TypeHierarchy& h, const FeatureStructure& a, const FeatureStructure& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  Unifier u(h, a, b);
  if (!u.unify(a.root(), u.offset() + b.root())) return u.failure();
  return u.result(a.root());
}

UnifyResult unify_at(const TypeHierarchy& h, const FeatureStructure& outer,
                     const FeaturePath& path, const FeatureStructure& inner) {
  auto at = outer.follow(path);
  if (!at) throw std::invalid_argument("unify_at: path " + to_string(h, path) + " not present");
  if (inner.empty()) return outer;
  Unifier u(h, outer, inner);
  u.set_path(path);
  if (!u.unify(*at, u.offset() + inner.root())) return u.failure();
  return u.result(outer.root());
}

bool subsumes(const TypeHierarchy& h, const FeatureStructure& general,
              const FeatureStructure& specific) {
  if (general.empty()) return true;
  if (specific.empty()) return false;
  constexpr NodeId none = UINT32_MAX;
  std::vector<NodeId> image(general.size(), none);
  std::vector<std::pair<NodeId, NodeId>> work{{general.root(), specific.root()}};
  while (!work.empty()) {
    auto [g, s] = work.back();
    work.pop_back();
    if (image[g] != none) {
      if (image[g] != s) return false;
      continue;
    }
    image[g] = s;
    if (!h.subtype_of(specific.type(s), general.type(g))) return false;
    for (const auto& arc : general.arcs(g)) {
      auto t = specific.follow(s, arc.feature);
      if (!t) return false;
      work.emplace_back(arc.target, *t);
    }
  }
  return true;
}

bool isomorphic(const FeatureStructure& a, const FeatureStructure& b) {
  // Normalized numbering makes isomorphism plain equality of node tables.
  return a == b;
}

}  // namespace hpsg
