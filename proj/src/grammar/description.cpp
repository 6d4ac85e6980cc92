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

#include "hpsg/grammar/description.hpp"

#include <map>
#include <unordered_map>

namespace hpsg {

ListSignature ListSignature::from(const TypeHierarchy& h) {
  ListSignature s;
  auto type = [&](const char* n) { return h.find(n).value_or(TypeId{}); };
  auto feat = [&](const char* n) { return h.find_feature(n).value_or(FeatureId{}); };
  s.list = type("*list*");
  s.cons = type("*cons*");
  s.null = type("*null*");
  s.diff_list = type("*diff-list*");
  s.first = feat("FIRST");
  s.rest = feat("REST");
  s.list_f = feat("LIST");
  s.last = feat("LAST");
  return s;
}

namespace {

class Compiler {
 public:
  explicit Compiler(const TypeHierarchy& h) : h_(h), sig_(ListSignature::from(h)) {}

  FeatureStructure run(const tdl::Conjunction& c) {
    NodeId root = add(h_.top());
    apply(root, c);
    FsBuilder b;
    std::unordered_map<NodeId, NodeId> built;
    std::vector<NodeId> work;
    auto node_for = [&](NodeId n) {
      n = find(n);
      auto [it, fresh] = built.emplace(n, 0);
      if (fresh) {
        it->second = b.add_node(nodes_[n].type);
        work.push_back(n);
      }
      return it->second;
    };
    NodeId r = node_for(root);
    while (!work.empty()) {
      NodeId n = work.back();
      work.pop_back();
      NodeId from = built.at(n);
      for (auto [f, t] : nodes_[n].arcs) b.set_arc(from, f, node_for(t));
    }
    try {
      return b.build(r);
    } catch (const MalformedStructure&) {
      throw DescriptionError(c.terms.front().loc, "description is cyclic");
    }
  }

 private:
  struct Node {
    TypeId type;
    NodeId parent;
    std::vector<std::pair<FeatureId, NodeId>> arcs;
  };

  NodeId add(TypeId t) {
    auto id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back({t, id, {}});
    return id;
  }

  NodeId find(NodeId n) {
    while (nodes_[n].parent != n) n = nodes_[n].parent = nodes_[nodes_[n].parent].parent;
    return n;
  }

  void restrict(NodeId n, TypeId t, const tdl::Location& loc) {
    n = find(n);
    auto g = h_.glb(nodes_[n].type, t);
    if (!g)
      throw DescriptionError(loc, "inconsistent types " + h_.name(nodes_[n].type) + " and " + h_.name(t));
    nodes_[n].type = *g;
  }

  NodeId child(NodeId n, FeatureId f) {
    n = find(n);
    for (auto [g, t] : nodes_[n].arcs)
      if (g == f) return find(t);
    NodeId c = add(h_.top());
    nodes_[n].arcs.emplace_back(f, c);
    return c;
  }

  void merge(NodeId a, NodeId b, const tdl::Location& loc) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    restrict(a, nodes_[b].type, loc);
    nodes_[b].parent = a;
    auto arcs = std::move(nodes_[b].arcs);
    for (auto [f, t] : arcs) {
      NodeId r = find(a);
      std::optional<NodeId> existing;
      for (auto [g, u] : nodes_[r].arcs)
        if (g == f) existing = u;
      if (existing)
        merge(*existing, t, loc);
      else
        nodes_[r].arcs.emplace_back(f, t);
    }
  }

  TypeId need(TypeId t, const char* name, const tdl::Location& loc) {
    if (!t.valid()) throw DescriptionError(loc, std::string("list syntax needs ") + name);
    return t;
  }
  FeatureId need(FeatureId f, const char* name, const tdl::Location& loc) {
    if (!f.valid()) throw DescriptionError(loc, std::string("list syntax needs feature ") + name);
    return f;
  }

  // Builds list cells from `cell` onwards and returns the node after the last item.
  NodeId cells(NodeId cell, const std::vector<tdl::Conjunction>& items, const tdl::Location& loc) {
    for (const auto& item : items) {
      restrict(cell, need(sig_.cons, "*cons*", loc), loc);
      apply(child(cell, need(sig_.first, "FIRST", loc)), item);
      cell = child(cell, need(sig_.rest, "REST", loc));
    }
    return cell;
  }

  void apply(NodeId n, const tdl::Conjunction& c) {
    for (const auto& t : c.terms) apply(n, t);
  }

  void apply(NodeId n, const tdl::Term& t) {
    using K = tdl::Term::Kind;
    switch (t.kind) {
      case K::type: {
        auto id = h_.find(t.text);
        if (!id || h_.is_string(*id)) throw DescriptionError(t.loc, "unknown type " + t.text);
        restrict(n, *id, t.loc);
        break;
      }
      case K::string: {
        auto id = h_.find("\"" + t.text + "\"");
        if (!id) throw DescriptionError(t.loc, "string \"" + t.text + "\" is not in the hierarchy");
        restrict(n, *id, t.loc);
        break;
      }
      case K::coref: {
        auto [it, fresh] = tags_.emplace(t.text, n);
        if (!fresh) merge(it->second, n, t.loc);
        break;
      }
      case K::avm:
        for (const auto& p : t.pairs) {
          NodeId cur = n;
          for (const auto& name : p.path) {
            auto f = h_.find_feature(name);
            if (!f) throw DescriptionError(p.loc, "unknown feature " + name);
            cur = child(cur, *f);
          }
          apply(cur, p.value);
        }
        break;
      case K::list: {
        NodeId end = cells(n, t.items, t.loc);
        if (t.open)
          restrict(end, need(sig_.list, "*list*", t.loc), t.loc);
        else if (!t.tail.empty())
          apply(end, t.tail.front());
        else
          restrict(end, need(sig_.null, "*null*", t.loc), t.loc);
        break;
      }
      case K::diff_list: {
        restrict(n, need(sig_.diff_list, "*diff-list*", t.loc), t.loc);
        NodeId list = child(n, need(sig_.list_f, "LIST", t.loc));
        NodeId end = cells(list, t.items, t.loc);
        merge(child(n, need(sig_.last, "LAST", t.loc)), end, t.loc);
        break;
      }
    }
  }

  const TypeHierarchy& h_;
  ListSignature sig_;
  std::vector<Node> nodes_;
  std::map<std::string, NodeId> tags_;
};

}  // namespace

FeatureStructure compile_description(const TypeHierarchy& h, const tdl::Conjunction& c) {
  return Compiler(h).run(c);
}

FeatureStructure parse_description(const TypeHierarchy& h, std::string_view text) {
  auto fs = compile_description(h, tdl::parse_conjunction(text));
  std::string error;
  auto inferred = infer_types(h, fs, &error);
  if (!inferred) throw DescriptionError({"<string>", 1, 1}, error);
  return *inferred;
}

}  // namespace hpsg
