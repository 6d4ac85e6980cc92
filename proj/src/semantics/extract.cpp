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

#include <optional>
#include <stdexcept>

#include "hpsg/semantics/mrs.hpp"

namespace hpsg {

const SemVar* ElementaryPredication::arg(std::string_view role) const {
  auto it = args.find(std::string(role));
  return it == args.end() ? nullptr : &it->second;
}

namespace {

class Extractor {
 public:
  Extractor(const Grammar& g, const FeatureStructure& fs) : h_(g.hierarchy()), fs_(fs) {
    auto type = [&](const char* n) { return h_.find(n); };
    handle_ = type("handle");
    event_ = type("event");
    ref_ind_ = type("ref-ind");
    individual_ = type("individual");
  }

  Mrs run() {
    Mrs m;
    m.top = var(node("HOOK.LTOP"));
    m.index = var(node("HOOK.INDEX"));
    for (auto& [n, path] : items("RELS")) m.eps.push_back(ep(n, path));
    for (auto& [n, path] : items("HCONS")) {
      HandleConstraint hc;
      hc.hi = var(child(n, "HARG", path));
      hc.lo = var(child(n, "LARG", path));
      m.hcons.push_back(std::move(hc));
    }
    return m;
  }

 private:
  [[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw MrsError("bad semantics at " + path + ": " + what);
  }

  NodeId node(const std::string& dotted) {
    FeaturePath p;
    try {
      p = parse_path(h_, dotted);
    } catch (const std::exception&) {
      fail(dotted, "unknown feature");
    }
    auto n = fs_.follow(p);
    if (!n) fail(dotted, "missing");
    return *n;
  }

  NodeId child(NodeId n, const char* feature, const std::string& path) {
    auto f = h_.find_feature(feature);
    auto c = f ? fs_.follow(n, *f) : std::nullopt;
    if (!c) fail(path + "." + feature, "missing");
    return *c;
  }

  // Elements of a LIST/LAST difference list, with their paths.
  std::vector<std::pair<NodeId, std::string>> items(const std::string& name) {
    std::vector<std::pair<NodeId, std::string>> out;
    NodeId last = node(name + ".LAST");
    std::string path = name + ".LIST";
    NodeId cur = node(path);
    auto first = h_.find_feature("FIRST");
    auto rest = h_.find_feature("REST");
    while (cur != last) {
      auto f = first ? fs_.follow(cur, *first) : std::nullopt;
      auto r = rest ? fs_.follow(cur, *rest) : std::nullopt;
      if (!f || !r) fail(path, "list does not reach " + name + ".LAST");
      out.emplace_back(*f, path + ".FIRST");
      cur = *r;
      path += ".REST";
      if (out.size() > fs_.size()) fail(path, "list does not end");
    }
    return out;
  }

  ElementaryPredication ep(NodeId n, const std::string& path) {
    ElementaryPredication e;
    NodeId pred = child(n, "PRED", path);
    TypeId pt = fs_.type(pred);
    if (!h_.is_string(pt)) fail(path + ".PRED", "not a string");
    const std::string& q = h_.name(pt);
    e.predicate = q.substr(1, q.size() - 2);
    e.label = var(child(n, "LBL", path));
    for (const auto& arc : fs_.arcs(n)) {
      const std::string& role = h_.feature_name(arc.feature);
      if (role == "PRED" || role == "LBL") continue;
      e.args[role] = var(arc.target);
    }
    return e;
  }

  char sort(TypeId t) const {
    auto below = [&](const std::optional<TypeId>& s) { return s && h_.subtype_of(t, *s); };
    if (below(handle_)) return 'h';
    if (below(event_)) return 'e';
    if (below(ref_ind_)) return 'x';
    if (below(individual_)) return 'i';
    return 'u';
  }

  void properties(NodeId n, std::map<std::string, std::string>& out) {
    for (const auto& arc : fs_.arcs(n)) {
      if (!fs_.arcs(arc.target).empty()) {
        properties(arc.target, out);
        continue;
      }
      TypeId v = fs_.type(arc.target);
      if (v != h_.value_restriction(fs_.type(n), arc.feature))
        out[h_.feature_name(arc.feature)] = h_.name(v);
    }
  }

  SemVar var(NodeId n) {
    auto it = vars_.find(n);
    if (it != vars_.end()) return it->second;
    SemVar v;
    v.sort = sort(fs_.type(n));
    v.index = next_++;
    properties(n, v.properties);
    vars_.emplace(n, v);
    return v;
  }

  const TypeHierarchy& h_;
  const FeatureStructure& fs_;
  std::optional<TypeId> handle_, event_, ref_ind_, individual_;
  std::map<NodeId, SemVar> vars_;
  int next_ = 1;
};

}  // namespace

Mrs extract_mrs(const Grammar& g, const FeatureStructure& fs) {
  if (!g.satisfies_root(fs)) throw std::invalid_argument("extract_mrs needs a root structure");
  return Extractor(g, fs).run();
}

}  // namespace hpsg
